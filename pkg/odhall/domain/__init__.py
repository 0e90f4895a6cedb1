"""Domain layer: entities and the numerical core."""

"""Square-tiled surfaces and cylinder diagrams."""

"""Scripts auxiliares do lietype."""

"""Higher Bruhat orders for intervals in finite and affine symmetric groups."""

"""Word values, verbal subgroups and conjugacy bounds in finite groups."""

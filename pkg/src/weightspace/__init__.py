"""Radial weights on the unit disc and the norms they induce."""

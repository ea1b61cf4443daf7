"""ckam backend."""

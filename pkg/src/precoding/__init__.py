"""Zero-forcing precoders and their power statistics."""

"""Network drops, large-scale fading and channel realizations."""

"""User grouping: K-means, LSF, random and the K_c sweep."""

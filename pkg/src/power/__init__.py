"""Power allocation: equal power and the SCA optimizer."""

"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested sieve limit exceeds the addressable flag capacity."""


class DegenerateDistributionError(ValueError):
    """A distribution operation requires strictly positive total mass or mean."""


class CacheError(OSError):
    """A cache file is missing, malformed, or fails its checksum."""

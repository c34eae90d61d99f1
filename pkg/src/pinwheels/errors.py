class ConfigurationError(ValueError):
    """Invalid parameters or an under-resolved discretization.

    ``key`` names the offending configuration entry when one is known.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

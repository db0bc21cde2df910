class PhotonlabError(Exception):
    r""" Base class of every error raised on purpose by photonlab. """


class DomainError(PhotonlabError, ValueError):
    r""" An argument lies outside the domain of a mathematical or physical relation. """


class UnsortedTagsError(PhotonlabError, ValueError):
    r""" A tag stream that should be non-decreasing in time is not. """

    def __init__(self, message: str, index: int = None):
        super().__init__(message)
        self.index = index


class BinningError(PhotonlabError, ValueError):
    r""" Histogram binning is incompatible with the requested integration. """


class TagFileError(PhotonlabError, ValueError):
    r""" Malformed tag file. `offset` is the byte position where reading failed. """

    def __init__(self, message: str, path: str = None, offset: int = None):
        location = f"{path}@{offset}" if path is not None else f"byte {offset}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.offset = offset


class ConfigError(PhotonlabError, ValueError):
    r""" Invalid or unreadable configuration. """

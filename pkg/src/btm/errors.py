"""Exception types shared across the package.

``exit_code`` separates bad input (1) from violated internal invariants (2);
the command-line front end maps exceptions to process exit codes through it.
"""


class BtmError(Exception):
    exit_code = 1


class BundleError(BtmError):
    """A bundle directory failed validation."""


class MissingFileError(BundleError):
    pass


class FormatError(BundleError):
    """Malformed manifest, CSV, or report payload."""


class PayloadSizeError(BundleError):
    """Binary embedding payload does not match the manifest dimensions."""


class UnknownTopicError(BundleError):
    """An assignment references a topic id missing from the topic set."""


class DuplicateDocIdError(BundleError):
    pass


class ZeroVectorError(BundleError):
    """An embedding row is the all-zero vector and cannot be compared."""


class OutlierUnavailableError(BundleError):
    """No outlier documents exist and no outlier embedding was provided."""


class DimensionMismatchError(BtmError):
    pass


class EmptyCorpusError(BtmError):
    """A cross model with no topics cannot assign anything."""


class NoNativeTopicsError(BtmError):
    """No defined non-outlier native topic rows to average over."""


class LabelDomainError(BtmError):
    """Two labelings cover different native topic sets."""


class DegenerateAgreementError(BtmError):
    """Chance agreement is exactly 1 while the labelings disagree."""


class ConfigError(BtmError):
    pass


class InternalInvariantError(BtmError):
    """A computed product violates an invariant the pipeline guarantees."""

    exit_code = 2

"""Exception types shared across the pipeline stages."""


class RolemineError(Exception):
    """Base class for all pipeline errors."""


class MalformedInput(RolemineError):
    """An article file could not be parsed; reported per file, never aborts a batch."""


class DegenerateMention(RolemineError):
    """Cleaning emptied a mention's action; the mention is dropped."""


class NullMention(RolemineError):
    """A mention contains no keywords at all after transformation."""


class EmptyTable(RolemineError):
    """Keyword induction produced no entries above the frequency threshold."""


class IsolatedCluster(RolemineError):
    """A cluster has no incident edges in the role graph."""


class UnknownRole(RolemineError):
    """A curation op referenced a role id that does not exist."""


class NameCollision(RolemineError):
    """A curation rename would duplicate an existing role name."""


class EmptyTrainingSet(RolemineError):
    """No labeled mentions are available for training."""


class ClassWithNoExamples(RolemineError):
    """A declared class has no training examples."""


class TableMismatch(RolemineError):
    """Mention or model does not match the keyword table in use."""


class ListFormatInput(RolemineError):
    """Extraction was asked to process a list-format section."""


class TraceUnavailable(RolemineError):
    """Error-cause breakdown requested without a pipeline trace."""


class MissingPrerequisite(RolemineError):
    """A pipeline stage was started before its input artifacts exist."""


class ConfigInvalid(RolemineError):
    """The pipeline configuration failed validation."""


class StateCorrupt(RolemineError):
    """A persisted cluster state could not be loaded."""


class PortInUse(RolemineError):
    """The requested service port is already bound."""

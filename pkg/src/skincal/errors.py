"""Exception types shared across the package."""


class SkincalError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(SkincalError, ValueError):
    """An argument violates a precondition (non-finite, out of range, ...)."""


class JointLimitError(InvalidArgumentError):
    """A joint angle is outside its configured limits."""

    def __init__(self, joint_index: int, value: float, limits):
        self.joint_index = joint_index
        self.value = value
        self.limits = tuple(limits)
        super().__init__(
            f"joint {joint_index}: angle {value:.6f} outside limits "
            f"[{self.limits[0]:.6f}, {self.limits[1]:.6f}]"
        )


class DataIncompleteError(SkincalError):
    """A required sample is missing from the dataset."""

    def __init__(self, pose_id, joint_index):
        self.pose_id = pose_id
        self.joint_index = joint_index
        super().__init__(
            f"missing dynamic sample for pose {pose_id}, excited joint {joint_index}"
        )


class DatasetFormatError(SkincalError):
    """A dataset or result file does not match the expected schema."""

    def __init__(self, message, json_path=None):
        self.json_path = json_path
        if json_path:
            message = f"{message} (at {json_path})"
        super().__init__(message)


class UnknownSuError(SkincalError, KeyError):
    """A skin-unit id is not present in the calibration result."""

"""Python bindings for the jinxin C++ library."""

from ._jinxin import *  # noqa: F401,F403
from ._jinxin import ContractError, NumericalError, ParameterError  # noqa: F401

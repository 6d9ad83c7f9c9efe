# Repository:   https://github.com/PyRadon
# File Name:    radon/error.py
# Description:  Exception hierarchy and error functions that log before exit.
#
# Copyright (C) 2026 Dieter J Kybelksties <github@kybelksties.com>
#
# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; either version 2
# of the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA  02111-1307, USA.
#
# @date: 2026-04-03
# @author: Dieter J Kybelksties

from __future__ import annotations

from radon.runtime_logger import log_fatal, log_critical, log_error


class RadonError(Exception):
    """Root of every error raised by the runtime."""


class InvalidNameError(RadonError, ValueError):
    pass


class InvalidQueryError(RadonError, ValueError):
    pass


class ConfigurationError(RadonError, ValueError):
    """A configuration document, settings file or cluster file is semantically invalid."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ConfigurationSyntaxError(ConfigurationError):
    """The document is not well-formed; carries the 1-based position of the problem."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line} column {column}: {message}")


class DuplicateDefinitionError(RadonError):
    pass


class UnknownDefinitionError(RadonError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown definition"


class NameConflictError(RadonError):
    """A name is already live somewhere in the deployment."""

    def __init__(self, name: str, node: str | None = None):
        self.name = name
        self.node = node
        super().__init__(f"name '{name}' is already registered" + (f" on node {node}" if node else ""))


class UnknownNameError(RadonError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown name"


class HostConstraintError(RadonError):
    pass


class PolicyError(RadonError):
    pass


class PayloadTooLargeError(RadonError, ValueError):
    pass


class UnknownDestinationError(RadonError):
    pass


class MailboxFullError(RadonError):
    pass


class InstanceStoppedError(RadonError):
    pass


class ResponseError(RadonError):
    pass


class StorageLimitError(RadonError, ValueError):
    pass


class StorageIOError(RadonError, OSError):
    pass


class ProtocolError(RadonError):
    pass


class RouteConflictError(RadonError):
    pass


class EmptyRingError(RadonError):
    pass


class RingCollisionError(RadonError):
    pass


class BenchError(RadonError):
    pass


class AtomFault(RadonError):
    """A guest activation failed; completes the events it was handling with status 500."""

    def __init__(self, atom: str, cause: BaseException | str):
        self.atom = atom
        self.cause = cause
        reason = cause if isinstance(cause, str) else f"{type(cause).__name__}: {cause}"
        super().__init__(f"atom '{atom}' faulted: {reason}")


class AtomExit(BaseException):
    """Raised by ``exit()`` inside a guest; not an Exception so guest handlers cannot swallow it."""


class AtomRetired(BaseException):
    """Raised inside an idle guest that the scheduler retires."""


def fatal(message, exception=SystemExit, error_code=1):
    log_fatal(message=message)
    raise exception(error_code)


def critical(message, exception=SystemExit, error_code=1):
    log_critical(message=message)
    raise exception(error_code)


def error(message, exception=SystemExit, error_code=1):
    log_error(message=message)
    raise exception(error_code)

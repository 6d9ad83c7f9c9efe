# Repository:   https://github.com/PyRadon
# File Name:    radon/log_levels.py
# Description:  Log-level and lifecycle-event definitions
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
# @date: 2026-04-02
# @author: Dieter J Kybelksties

from __future__ import annotations

import logging
from enum import auto

from fundamentals.extended_enum import ExtendedEnum


class LogLevel(ExtendedEnum):
    NOTSET = auto()
    DEBUG = auto()
    INFO = auto()
    LIFECYCLE = auto()
    WARNING = auto()
    ERROR = auto()
    FATAL = auto()
    CRITICAL = auto()

    def logging_level(self) -> int:
        """
        Return the associated logging level for this flag.
        :return: the logging level integer
        """
        return {v: k for k, v in LogLevel.standard_mapping.items()}.get(self, logging.NOTSET)

    @classmethod
    def from_logging_level(cls, level: int) -> LogLevel:
        """
        Map a numeric logging level back onto the enum.
        Unknown levels resolve to the closest defined level below them.

        :param level: the numeric log level value
        :return: the LogLevel enum member
        """
        if level in LogLevel.standard_mapping:
            return LogLevel.standard_mapping[level]
        best = cls.NOTSET
        for numeric, member in sorted(LogLevel.standard_mapping.items()):
            if numeric <= level:
                best = member
        return best

    @classmethod
    def parse(cls, level: LogLevel | str | int) -> LogLevel:
        """
        Accept a LogLevel, its name (any case) or a numeric logging level.
        """
        if isinstance(level, LogLevel):
            return level
        if isinstance(level, int):
            return cls.from_logging_level(level)
        return cls[str(level).upper()]

    def is_alarming(self) -> bool:
        """Levels rendered in upper case."""
        return self in (LogLevel.WARNING, LogLevel.ERROR, LogLevel.FATAL, LogLevel.CRITICAL)

    def __str__(self) -> str:
        return self.name.lower()


class Lifecycle(ExtendedEnum):
    """Atom lifecycle transitions that are logged as structured lines."""
    SPAWN = auto()
    FAULT = auto()
    RESTART = auto()
    EXPIRE = auto()
    EXIT = auto()
    RETIRE = auto()
    CONFLICT = auto()

    def __str__(self) -> str:
        return self.name.lower()


LogLevel.lifecycle_level = logging.INFO + 2

# Mapping of standard Python logging levels
LogLevel.standard_mapping = {
    logging.NOTSET: LogLevel.NOTSET,
    logging.DEBUG: LogLevel.DEBUG,
    logging.INFO: LogLevel.INFO,
    LogLevel.lifecycle_level: LogLevel.LIFECYCLE,
    logging.WARNING: LogLevel.WARNING,
    logging.ERROR: LogLevel.ERROR,
    logging.CRITICAL: LogLevel.CRITICAL,
    logging.FATAL + 1: LogLevel.FATAL,
}

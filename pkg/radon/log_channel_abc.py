# Repository:   https://github.com/PyRadon
# File Name:    radon/log_channel_abc.py
# Description:  Base class and shared line rendering for log channels
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

import datetime
import json
import logging
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping
from enum import auto
from typing import Any

from fundamentals.extended_enum import ExtendedEnum

from radon.log_levels import LogLevel


class OutputFormat(ExtendedEnum):
    """Output format for log messages."""
    HUMAN_READABLE = auto()
    KEY_VALUE = auto()
    JSON_LINES = auto()

    @classmethod
    def parse(cls, value: OutputFormat | str) -> OutputFormat:
        if isinstance(value, OutputFormat):
            return value
        if isinstance(value, str):
            return cls[value.upper()]
        raise ValueError(f"Invalid output_format type: {type(value)}. Expected OutputFormat or str.")


class LogField(ExtendedEnum):
    """Standard log line fields."""
    TIMESTAMP = "t"
    LEVEL = "level"
    MESSAGE = "msg"


def iso_timestamp(created: float) -> str:
    """
    Render a record creation time as ISO-8601 in UTC.
    :param created: seconds since the epoch
    :return: the timestamp string
    """
    return datetime.datetime.fromtimestamp(created, tz=datetime.timezone.utc).isoformat(timespec="microseconds")


def format_value(value: Any) -> str:
    """Render a field value for key=value output, quoting when it would not parse back."""
    text = value if isinstance(value, str) else str(value)
    if text == "" or any(ch in text for ch in ' ="\t\n'):
        return json.dumps(text)
    return text


def level_label(log_level: LogLevel) -> str:
    label = str(log_level)
    return label.upper() if log_level.is_alarming() else label


def record_fields(record: logging.LogRecord) -> dict[str, Any]:
    fields = getattr(record, "fields", None)
    return dict(fields) if isinstance(fields, Mapping) else {}


def render_record(record: logging.LogRecord,
                  output_format: OutputFormat,
                  paint: Callable[[str, str], str] | None = None) -> str:
    """
    Render a record into one line.

    Lifecycle records carry their own ``t`` field and no message, so their key=value form is exactly
    ``event=.. atom=.. def=.. t=..`` followed by the extra fields.

    :param record: the record, with structured fields in ``record.fields``
    :param output_format: the requested layout
    :param paint: optional colouring callback ``paint(colour_key, text)``
    :return: the rendered line
    """
    def _paint(key: str, text: str) -> str:
        return paint(key, text) if paint is not None else text

    log_level = LogLevel.from_logging_level(record.levelno)
    fields = record_fields(record)
    message = record.getMessage() if record.msg else ""
    timestamp = iso_timestamp(record.created)
    is_lifecycle = log_level == LogLevel.LIFECYCLE and "event" in fields

    if output_format == OutputFormat.JSON_LINES:
        data: dict[str, Any] = {}
        if not is_lifecycle:
            data[LogField.TIMESTAMP.value] = timestamp
        data[LogField.LEVEL.value] = str(log_level)
        if message:
            data[LogField.MESSAGE.value] = message
        data.update(fields)
        return json.dumps(data, default=str)

    pairs = " ".join(_paint("key", f"{key}=") + _paint("value", format_value(value)) for key, value in fields.items())
    if output_format == OutputFormat.KEY_VALUE:
        if is_lifecycle:
            return pairs
        head = f"t={timestamp} level={level_label(log_level)}"
        if message:
            head += f" msg={format_value(message)}"
        return f"{head} {pairs}" if pairs else head

    level_name = str(log_level)
    head = (_paint("operator", "[") + _paint("timestamp", timestamp) + _paint("operator", "]") + " "
            + _paint("operator", "[") + _paint(level_name, level_label(log_level)) + _paint("operator", "]"))
    parts = [head]
    if message:
        parts.append(_paint("message", message))
    if pairs:
        parts.append(pairs)
    return " ".join(parts)


class LogChannelABC(ABC):
    """Abstract base class for log channels.

    A channel decides which levels it emits. Three selection modes exist, in priority order:
    an exclusion set, an inclusion set, or a minimum level. Without any of them every level passes.
    """

    def __init__(self,
                 minimum_log_level: LogLevel | str | int | None = None,
                 include_log_levels: Iterable[LogLevel | str | int] | LogLevel | str | None = None,
                 exclude_log_levels: Iterable[LogLevel | str | int] | LogLevel | str | None = None,
                 output_format: OutputFormat | str | None = None):
        self.__loggable_levels: set[LogLevel] = set(LogLevel)
        self.output_format = OutputFormat.parse(output_format) if output_format is not None \
            else OutputFormat.HUMAN_READABLE
        if exclude_log_levels is not None:
            self.__loggable_levels = set(LogLevel) - self._level_set(exclude_log_levels)
        elif include_log_levels is not None:
            self.__loggable_levels = self._level_set(include_log_levels)
        elif minimum_log_level is not None:
            self.log_levels = minimum_log_level

    @staticmethod
    def _level_set(levels: Iterable[LogLevel | str | int] | LogLevel | str | int) -> set[LogLevel]:
        if isinstance(levels, (LogLevel, str, int)):
            return {LogLevel.parse(levels)}
        return {LogLevel.parse(level) for level in levels}

    @property
    def log_levels(self) -> set[LogLevel]:
        """
        Get the current log level filter.
        :return: set of loggable levels
        """
        return self.__loggable_levels

    @log_levels.setter
    def log_levels(self, log_level: Any) -> None:
        """
        Set the log level filter. Supports three modes:

        1. Single log level (threshold mode): only log levels >= this level
        2. Iterable of log levels (inclusion mode): only log the specified levels
        3. Dict with "exclude" key (exclusion mode): log all levels except specified ones
        """
        if isinstance(log_level, dict) and "exclude" in log_level:
            self.__loggable_levels = set(LogLevel) - self._level_set(log_level["exclude"])
            return
        if not isinstance(log_level, (str, int, LogLevel, dict)) and isinstance(log_level, Iterable):
            self.__loggable_levels = self._level_set(log_level)
            return
        threshold = LogLevel.parse(log_level) if log_level is not None else LogLevel.NOTSET
        self.__loggable_levels = {level for level in LogLevel
                                  if level.logging_level() >= threshold.logging_level()}

    def is_loggable(self, log_level: LogLevel | str | int) -> bool:
        """
        Check if the given log level is loggable.
        :param log_level: the log level to check
        :return: True if loggable, False otherwise
        """
        return LogLevel.parse(log_level) in self.__loggable_levels

    def set_output_format(self, output_format: OutputFormat | str) -> None:
        """
        Set the output format for this channel.

        :param output_format: OutputFormat enum or string equivalent
        """
        self.output_format = OutputFormat.parse(output_format)

    def close(self) -> None:
        """Release resources held by the channel."""

    @abstractmethod
    def do_log(self, log_level: LogLevel | str | int, message: str = "", **fields: Any) -> None:
        """
        Log a message.
        :param log_level: the log level
        :param message: free text, may be empty
        :param fields: structured key=value fields appended to the line
        """

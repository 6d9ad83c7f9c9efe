# Repository:   https://github.com/PyRadon
# File Name:    radon/runtime_logger.py
# Description:  Runtime logger fanning records out to console and file channels
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

import inspect
import os
import sys
import threading
import time
from collections.abc import Iterable
from os import PathLike
from pathlib import Path
from typing import Any

from radon.color_scheme import ColorScheme
from radon.log_channel_abc import LogChannelABC, OutputFormat, iso_timestamp
from radon.log_channel_console import LogChannelConsole
from radon.log_channel_file import FileLogChannel
from radon.log_levels import Lifecycle, LogLevel


def _get_call_site_info() -> tuple[str | None, int | None]:
    """
    Get the file name and line number of the first caller outside this module.

    :return: Tuple of (filename, lineno) or (None, None) if inspection fails
    """
    frame = inspect.currentframe()
    while frame is not None and frame.f_code.co_filename == __file__:
        frame = frame.f_back
    if frame is None:
        return None, None
    return os.path.basename(frame.f_code.co_filename), frame.f_lineno


class RuntimeLogger:
    """
    Fans log records out to every registered channel.

    Records at ERROR and above carry the call site (``at=file:line``) so faults can be traced back.
    """

    def __init__(self,
                 log_channels: LogChannelABC | Iterable[LogChannelABC] | None = None,
                 console: ColorScheme.Default | None = None,
                 log_file: str | PathLike | Path | None = None):
        """
        :param log_channels: explicitly provided channels to add
        :param console: if not None, creates a console channel with that colour scheme
        :param log_file: if provided, creates a file channel writing to this path
        """
        channels_to_add: list[LogChannelABC] = []
        if isinstance(log_channels, LogChannelABC):
            channels_to_add.append(log_channels)
        elif log_channels is not None:
            channels_to_add.extend(log_channels)
        if console is not None:
            channels_to_add.append(LogChannelConsole(color_scheme=console))
        if log_file is not None:
            channels_to_add.append(FileLogChannel(log_file))
        if not channels_to_add:
            raise ValueError(f"No log channels specified when creating {__class__.__name__} instance")

        self._lock = threading.Lock()
        self.log_channels: list[LogChannelABC] = []
        self._channel_selectors: dict[str, LogChannelABC] = {}
        for log_channel in channels_to_add:
            self.add_channel(log_channel)

    def add_channel(self, log_channel: LogChannelABC, selector: str | None = None) -> None:
        """
        Add a log channel to this logger.
        :param log_channel: the channel to add
        :param selector: optional name for accessing this channel later
        """
        with self._lock:
            if log_channel not in self.log_channels:
                self.log_channels.append(log_channel)
            if selector is not None:
                self._channel_selectors[selector] = log_channel

    def remove_channel(self, channel: LogChannelABC | str) -> None:
        """
        Remove and close a log channel.
        :param channel: the channel instance or its selector name
        """
        with self._lock:
            target = self._channel_selectors.pop(channel, None) if isinstance(channel, str) else channel
            if target is not None and target in self.log_channels:
                self.log_channels.remove(target)
                target.close()
            for sel, chan in list(self._channel_selectors.items()):
                if chan is target:
                    del self._channel_selectors[sel]

    def get_channel(self, selector: str) -> LogChannelABC:
        """
        Get a channel by selector name, or by 'console'/'file'.
        :raises ValueError: if no matching channel is found
        """
        if selector in self._channel_selectors:
            return self._channel_selectors[selector]
        wanted = {"console": LogChannelConsole, "file": FileLogChannel}.get(selector.lower())
        for channel in self.log_channels:
            if wanted is not None and isinstance(channel, wanted):
                return channel
        raise ValueError(f"No channel found matching '{selector}'")

    def log(self, level: LogLevel | str | int, message: str = "", **fields: Any) -> None:
        """Log a message at the specified level to all registered channels.

        :param level: the log level
        :param message: free text
        :param fields: structured key=value fields
        """
        level = LogLevel.parse(level)
        if level.logging_level() >= LogLevel.ERROR.logging_level() and "at" not in fields:
            file, line = _get_call_site_info()
            if file is not None:
                fields["at"] = f"{file}:{line}"
        for channel in list(self.log_channels):
            try:
                channel.do_log(level, message, **fields)
            except Exception as e:
                print(f"Error logging to channel {type(channel).__name__}: {e}", file=sys.stderr)
                print(f"[{str(level).upper()}] {message}", file=sys.stderr, flush=True)

    def log_debug(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.DEBUG, message, **fields)

    def log_info(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.INFO, message, **fields)

    def log_warning(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.WARNING, message, **fields)

    def log_error(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.ERROR, message, **fields)

    def log_fatal(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.FATAL, message, **fields)

    def log_critical(self, message: str = "", **fields: Any) -> None:
        self.log(LogLevel.CRITICAL, message, **fields)

    def log_lifecycle(self, event: Lifecycle, atom: str, definition: str, **extra: Any) -> None:
        """
        Log an atom lifecycle transition as ``event=.. atom=.. def=.. t=..`` plus extra fields.

        :param event: the transition
        :param atom: the instance name
        :param definition: the definition name
        :param extra: appended fields such as node, incarnation or reason
        """
        fields: dict[str, Any] = {
            "event": str(event).lower(),
            "atom": atom,
            "def": definition,
            "t": iso_timestamp(time.time()),
        }
        fields.update(extra)
        self.log(LogLevel.LIFECYCLE, "", **fields)

    def set_output_format(self, output_format: OutputFormat | str) -> None:
        """
        Set the output format for all channels in this logger.

        :param output_format: OutputFormat enum or string equivalent
        """
        output_format = OutputFormat.parse(output_format)
        for channel in self.log_channels:
            channel.set_output_format(output_format)

    def set_minimum_level(self, level: LogLevel | str | int) -> None:
        for channel in self.log_channels:
            channel.log_levels = level

    def close(self) -> None:
        for channel in list(self.log_channels):
            self.remove_channel(channel)


# Lazy global logger - created when first accessed
_global_logger: RuntimeLogger | None = None
_global_lock = threading.Lock()


def get_logger(console: ColorScheme.Default | None = None,
               log_file: str | PathLike | Path | None = None) -> RuntimeLogger:
    """
    Get the global logger instance, creating it if necessary.
    Additional channels are added if they don't already exist.

    :param console: if provided, ensures a console channel exists
    :param log_file: if provided, ensures a file channel exists for the given path
    :return: the global RuntimeLogger instance
    """
    global _global_logger
    with _global_lock:
        if _global_logger is None:
            _global_logger = RuntimeLogger(LogChannelConsole(minimum_log_level=LogLevel.INFO,
                                                             output_format=OutputFormat.KEY_VALUE,
                                                             color_scheme=ColorScheme.Default.PLAIN_TEXT))

    if console is not None and not any(isinstance(ch, LogChannelConsole) for ch in _global_logger.log_channels):
        _global_logger.add_channel(LogChannelConsole(color_scheme=console))

    if log_file is not None:
        file_path = Path(log_file)
        if not any(isinstance(ch, FileLogChannel) and ch.log_file == file_path for ch in _global_logger.log_channels):
            _global_logger.add_channel(FileLogChannel(file_path))

    return _global_logger


def configure_logging(output_format: OutputFormat | str = OutputFormat.KEY_VALUE,
                      level: LogLevel | str | int = LogLevel.INFO,
                      color: ColorScheme.Default | str = ColorScheme.Default.COLOR,
                      log_file: str | PathLike | Path | None = None) -> RuntimeLogger:
    """
    Replace the global logger's channels: one console channel and optionally one file channel.

    :param output_format: console layout
    :param level: minimum level for both channels
    :param color: console colour scheme
    :param log_file: node log file, written as key=value lines
    :return: the global RuntimeLogger instance
    """
    if isinstance(color, str):
        color = ColorScheme.Default[color.upper()]
    logger = get_logger()
    logger.close()
    logger.add_channel(LogChannelConsole(color_scheme=color, minimum_log_level=level, output_format=output_format),
                       selector="console")
    if log_file is not None:
        logger.add_channel(FileLogChannel(log_file, minimum_log_level=level), selector="file")
    return logger


def log(level: LogLevel | str | int, message: str = "", **fields: Any) -> None:
    get_logger().log(level, message, **fields)


def log_debug(message: str = "", **fields: Any) -> None:
    get_logger().log_debug(message, **fields)


def log_info(message: str = "", **fields: Any) -> None:
    get_logger().log_info(message, **fields)


def log_warning(message: str = "", **fields: Any) -> None:
    get_logger().log_warning(message, **fields)


def log_error(message: str = "", **fields: Any) -> None:
    get_logger().log_error(message, **fields)


def log_fatal(message: str = "", **fields: Any) -> None:
    get_logger().log_fatal(message, **fields)


def log_critical(message: str = "", **fields: Any) -> None:
    get_logger().log_critical(message, **fields)


def log_lifecycle(event: Lifecycle, atom: str, definition: str, **extra: Any) -> None:
    get_logger().log_lifecycle(event, atom, definition, **extra)

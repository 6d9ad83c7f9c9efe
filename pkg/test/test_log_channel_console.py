# Repository:   https://github.com/PyRadon
# File Name:    test/test_log_channel_console.py
# Description:  Unit tests for the console log channel
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
# @date: 2026-04-19
# @author: Dieter J Kybelksties

import io
import json
import logging
import unittest

from radon.color_scheme import ColorScheme
from radon.log_channel_abc import OutputFormat
from radon.log_channel_console import ConsoleFormatter, LogChannelConsole
from radon.log_levels import LogLevel


def console(**kwargs) -> tuple[LogChannelConsole, io.StringIO]:
    stream = io.StringIO()
    kwargs.setdefault("color_scheme", ColorScheme.Default.PLAIN_TEXT)
    return LogChannelConsole(stream=stream, **kwargs), stream


class ConsoleFormatterTests(unittest.TestCase):

    def _record(self, level: LogLevel, message: str, **fields) -> logging.LogRecord:
        record = logging.LogRecord(name="test", level=level.logging_level(), pathname="", lineno=0,
                                   msg=message, args=(), exc_info=None)
        record.fields = fields
        return record

    def test_human_readable_is_coloured(self):
        formatter = ConsoleFormatter(ColorScheme(ColorScheme.Default.COLOR, use_user_config=False))
        result = formatter.format(self._record(LogLevel.ERROR, "Error message"))
        self.assertIn("Error message", result)
        self.assertIn('\x1b[', result)

    def test_machine_formats_stay_plain(self):
        formatter = ConsoleFormatter(ColorScheme(ColorScheme.Default.COLOR, use_user_config=False),
                                     OutputFormat.KEY_VALUE)
        result = formatter.format(self._record(LogLevel.INFO, "hello", node="n1"))
        self.assertNotIn('\x1b[', result)
        self.assertTrue(result.endswith("msg=hello node=n1"))


class LogChannelConsoleTests(unittest.TestCase):

    def test_writes_key_value_lines(self):
        channel, stream = console(output_format="key_value")
        channel.do_log(LogLevel.INFO, "node started", node="n1", http="127.0.0.1:8100")
        line = stream.getvalue().strip()
        self.assertIn("level=info", line)
        self.assertIn('msg="node started"', line)
        self.assertTrue(line.endswith("node=n1 http=127.0.0.1:8100"))
        channel.close()

    def test_respects_minimum_level(self):
        channel, stream = console(minimum_log_level=LogLevel.WARNING)
        channel.do_log(LogLevel.LIFECYCLE, "", event="spawn")
        channel.do_log(LogLevel.INFO, "quiet")
        self.assertEqual("", stream.getvalue())
        channel.do_log("error", "loud")
        self.assertIn("loud", stream.getvalue())
        channel.close()

    def test_switch_to_json_lines(self):
        channel, stream = console()
        channel.set_output_format(OutputFormat.JSON_LINES)
        channel.do_log(LogLevel.WARNING, "link down", peer="n2")
        data = json.loads(stream.getvalue())
        self.assertEqual("warning", data["level"])
        self.assertEqual("n2", data["peer"])
        channel.close()

    def test_set_color_scheme(self):
        channel, stream = console()
        channel.set_color_scheme(ColorScheme.Default.BLACK_AND_WHITE)
        self.assertFalse(channel.color_scheme.is_plain)
        self.assertIs(channel.color_scheme, channel._formatter.color_scheme)
        with self.assertRaises(ValueError):
            channel.set_color_scheme(42)
        channel.close()

    def test_closed_channel_is_silent(self):
        channel, stream = console()
        channel.close()
        channel.do_log(LogLevel.INFO, "after close")
        self.assertEqual("", stream.getvalue())

    def test_channels_do_not_share_handlers(self):
        first, first_stream = console()
        second, second_stream = console()
        first.do_log(LogLevel.INFO, "only first")
        self.assertIn("only first", first_stream.getvalue())
        self.assertEqual("", second_stream.getvalue())
        first.close()
        second.close()


if __name__ == '__main__':
    unittest.main()

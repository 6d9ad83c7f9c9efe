# Repository:   https://github.com/PyRadon
# File Name:    test/test_log_channel_abc.py
# Description:  Unit tests for channel level selection and line rendering
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

import json
import logging
import unittest

from radon.log_channel_abc import LogChannelABC, OutputFormat, format_value, iso_timestamp, render_record
from radon.log_levels import LogLevel


class MockLogChannel(LogChannelABC):
    """Concrete implementation of LogChannelABC for testing."""
    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self.logged_messages = []

    def do_log(self, log_level, message="", **fields):
        self.logged_messages.append((log_level, message, fields))


def make_record(level: LogLevel, message: str = "", **fields) -> logging.LogRecord:
    record = logging.LogRecord(name="test", level=level.logging_level(), pathname="", lineno=0,
                               msg=message, args=(), exc_info=None)
    record.created = 0.0
    record.fields = fields
    return record


class LogChannelABCTests(unittest.TestCase):

    def test_init_default_all_levels_loggable(self):
        """Test default initialization allows all levels."""
        channel = MockLogChannel()
        for level in LogLevel:
            self.assertTrue(channel.is_loggable(level))

    def test_init_minimum_log_level_threshold(self):
        """Test minimum_log_level sets threshold."""
        channel = MockLogChannel(minimum_log_level=LogLevel.LIFECYCLE)
        self.assertFalse(channel.is_loggable(LogLevel.DEBUG))
        self.assertFalse(channel.is_loggable(LogLevel.INFO))
        self.assertTrue(channel.is_loggable(LogLevel.LIFECYCLE))
        self.assertTrue(channel.is_loggable(LogLevel.ERROR))

    def test_init_minimum_log_level_string_and_int(self):
        self.assertFalse(MockLogChannel(minimum_log_level="ERROR").is_loggable(LogLevel.WARNING))
        self.assertTrue(MockLogChannel(minimum_log_level=logging.ERROR).is_loggable("error"))

    def test_init_include_log_levels(self):
        """Test include_log_levels specifies allowed levels."""
        channel = MockLogChannel(include_log_levels=["lifecycle", logging.ERROR])
        self.assertTrue(channel.is_loggable(LogLevel.LIFECYCLE))
        self.assertTrue(channel.is_loggable(LogLevel.ERROR))
        self.assertFalse(channel.is_loggable(LogLevel.INFO))

    def test_init_exclude_log_levels(self):
        """Test exclude_log_levels blocks specified levels."""
        channel = MockLogChannel(exclude_log_levels=[LogLevel.DEBUG, LogLevel.LIFECYCLE])
        self.assertFalse(channel.is_loggable(LogLevel.DEBUG))
        self.assertFalse(channel.is_loggable(LogLevel.LIFECYCLE))
        self.assertTrue(channel.is_loggable(LogLevel.INFO))

    def test_setter_modes(self):
        channel = MockLogChannel()
        channel.log_levels = LogLevel.WARNING
        self.assertFalse(channel.is_loggable(LogLevel.INFO))
        channel.log_levels = [LogLevel.INFO]
        self.assertEqual({LogLevel.INFO}, channel.log_levels)
        channel.log_levels = {"exclude": [LogLevel.DEBUG]}
        self.assertFalse(channel.is_loggable(LogLevel.DEBUG))
        self.assertTrue(channel.is_loggable(LogLevel.INFO))

    def test_do_log_not_implemented_in_abstract_class(self):
        """Test that abstract class cannot be instantiated without implementing do_log."""
        class PartialChannel(LogChannelABC):
            pass

        with self.assertRaises(TypeError):
            PartialChannel()

    def test_output_format(self):
        channel = MockLogChannel()
        self.assertEqual(OutputFormat.HUMAN_READABLE, channel.output_format)
        channel.set_output_format("json_lines")
        self.assertEqual(OutputFormat.JSON_LINES, channel.output_format)
        with self.assertRaises(ValueError):
            OutputFormat.parse(42)


class RenderRecordTests(unittest.TestCase):

    def test_format_value_quotes_when_needed(self):
        self.assertEqual("kv/n1/0", format_value("kv/n1/0"))
        self.assertEqual('"two words"', format_value("two words"))
        self.assertEqual('""', format_value(""))
        self.assertEqual('"a=b"', format_value("a=b"))
        self.assertEqual("3", format_value(3))

    def test_key_value_line(self):
        line = render_record(make_record(LogLevel.WARNING, "link down", peer="n2"), OutputFormat.KEY_VALUE)
        self.assertEqual(f"t={iso_timestamp(0.0)} level=WARNING msg=\"link down\" peer=n2", line)

    def test_lifecycle_line_has_fixed_field_order(self):
        record = make_record(LogLevel.LIFECYCLE)
        record.fields = {"event": "spawn", "atom": "kv/n1/0", "def": "kvnode", "t": "T", "node": "n1"}
        self.assertEqual("event=spawn atom=kv/n1/0 def=kvnode t=T node=n1",
                         render_record(record, OutputFormat.KEY_VALUE))

    def test_json_lines(self):
        line = render_record(make_record(LogLevel.INFO, "node started", node="n1"), OutputFormat.JSON_LINES)
        data = json.loads(line)
        self.assertEqual({"t": iso_timestamp(0.0), "level": "info", "msg": "node started", "node": "n1"}, data)

    def test_human_readable_uses_paint(self):
        painted = []
        line = render_record(make_record(LogLevel.ERROR, "boom", atom="a"), OutputFormat.HUMAN_READABLE,
                             lambda key, text: painted.append(key) or text)
        self.assertIn("[ERROR]", line)
        self.assertIn("boom", line)
        self.assertIn("atom=a", line)
        self.assertIn("error", painted)
        self.assertIn("key", painted)


if __name__ == "__main__":
    unittest.main()

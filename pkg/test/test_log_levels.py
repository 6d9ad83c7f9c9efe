# Repository:   https://github.com/PyRadon
# File Name:    test/test_log_levels.py
# Description:  Unit tests for log levels and lifecycle transitions
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

import logging
import unittest

from radon.log_levels import Lifecycle, LogLevel


class LogLevelTests(unittest.TestCase):

    def test_logging_level_mapping(self):
        """Test logging_level() method returns correct values."""
        self.assertEqual(LogLevel.NOTSET.logging_level(), logging.NOTSET)
        self.assertEqual(LogLevel.DEBUG.logging_level(), logging.DEBUG)
        self.assertEqual(LogLevel.INFO.logging_level(), logging.INFO)
        self.assertEqual(LogLevel.WARNING.logging_level(), logging.WARNING)
        self.assertEqual(LogLevel.ERROR.logging_level(), logging.ERROR)
        self.assertEqual(LogLevel.CRITICAL.logging_level(), logging.CRITICAL)

    def test_lifecycle_sits_between_info_and_warning(self):
        self.assertEqual(logging.INFO + 2, LogLevel.LIFECYCLE.logging_level())
        self.assertLess(LogLevel.INFO.logging_level(), LogLevel.LIFECYCLE.logging_level())
        self.assertLess(LogLevel.LIFECYCLE.logging_level(), LogLevel.WARNING.logging_level())

    def test_fatal_is_above_critical(self):
        self.assertEqual(logging.CRITICAL + 1, LogLevel.FATAL.logging_level())

    def test_from_logging_level(self):
        """Unknown numeric levels fall to the closest defined level below them."""
        self.assertEqual(LogLevel.WARNING, LogLevel.from_logging_level(logging.WARNING))
        self.assertEqual(LogLevel.INFO, LogLevel.from_logging_level(21))
        self.assertEqual(LogLevel.LIFECYCLE, LogLevel.from_logging_level(25))
        self.assertEqual(LogLevel.NOTSET, LogLevel.from_logging_level(-3))
        self.assertEqual(LogLevel.FATAL, LogLevel.from_logging_level(99))

    def test_parse(self):
        self.assertIs(LogLevel.ERROR, LogLevel.parse(LogLevel.ERROR))
        self.assertIs(LogLevel.DEBUG, LogLevel.parse("debug"))
        self.assertIs(LogLevel.LIFECYCLE, LogLevel.parse("Lifecycle"))
        self.assertIs(LogLevel.WARNING, LogLevel.parse(logging.WARNING))
        with self.assertRaises(KeyError):
            LogLevel.parse("chatty")

    def test_str_representation(self):
        self.assertEqual("info", str(LogLevel.INFO))
        self.assertEqual("lifecycle", str(LogLevel.LIFECYCLE))

    def test_alarming_levels(self):
        alarming = {level for level in LogLevel if level.is_alarming()}
        self.assertEqual({LogLevel.WARNING, LogLevel.ERROR, LogLevel.FATAL, LogLevel.CRITICAL}, alarming)


class LifecycleTests(unittest.TestCase):

    def test_transitions_render_lower_case(self):
        self.assertEqual("spawn", str(Lifecycle.SPAWN))
        self.assertEqual("expire", str(Lifecycle.EXPIRE))
        self.assertEqual({"spawn", "fault", "restart", "expire", "exit", "retire", "conflict"},
                         {str(event) for event in Lifecycle})


if __name__ == '__main__':
    unittest.main()

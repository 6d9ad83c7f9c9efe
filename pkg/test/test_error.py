# Repository:   https://github.com/PyRadon
# File Name:    test/test_error.py
# Description:  Unit tests for the error module.
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

import unittest
from unittest.mock import patch

from radon.error import (AtomExit, AtomFault, ConfigurationError, ConfigurationSyntaxError, NameConflictError,
                         RadonError, StorageLimitError, UnknownNameError, critical, error, fatal)


class ErrorExitTests(unittest.TestCase):

    @patch('radon.error.log_fatal')
    def test_fatal_logs_and_exits(self, mock_log):
        """Test that fatal() logs a message and raises SystemExit."""
        with self.assertRaises(SystemExit) as cm:
            fatal("node n1 halted by an escalated fault")
        mock_log.assert_called_once_with(message="node n1 halted by an escalated fault")
        self.assertEqual(cm.exception.code, 1)

    @patch('radon.error.log_critical')
    def test_critical_with_custom_error_code(self, mock_log):
        """Test critical() with a custom error code."""
        with self.assertRaises(SystemExit) as cm:
            critical("Custom error code test", error_code=127)
        mock_log.assert_called_once_with(message="Custom error code test")
        self.assertEqual(cm.exception.code, 127)

    @patch('radon.error.log_error')
    def test_error_logs_and_exits(self, mock_log):
        """Test that error() logs a message and raises SystemExit."""
        with self.assertRaises(SystemExit) as cm:
            error("bad cluster file", error_code=2)
        mock_log.assert_called_once_with(message="bad cluster file")
        self.assertEqual(cm.exception.code, 2)

    @patch('radon.error.log_fatal')
    def test_fatal_with_custom_exception(self, mock_log):
        """Test fatal() with a custom exception."""
        class CustomException(Exception):
            pass

        with self.assertRaises(CustomException):
            fatal("Custom exception test", exception=CustomException)
        mock_log.assert_called_once_with(message="Custom exception test")


class ErrorHierarchyTests(unittest.TestCase):

    def test_configuration_error_names_path(self):
        e = ConfigurationError("count must be a positive integer", "$.atoms[0].count")
        self.assertEqual("$.atoms[0].count", e.path)
        self.assertEqual("$.atoms[0].count: count must be a positive integer", str(e))
        self.assertIsInstance(e, ValueError)

    def test_syntax_error_position(self):
        e = ConfigurationSyntaxError("Expecting value", 3, 7)
        self.assertEqual((3, 7), (e.line, e.column))
        self.assertIn("line 3 column 7", str(e))
        self.assertIsInstance(e, ConfigurationError)

    def test_name_conflict_mentions_owner(self):
        self.assertEqual("name 'coord' is already registered on node n2", str(NameConflictError("coord", "n2")))
        self.assertEqual("name 'coord' is already registered", str(NameConflictError("coord")))

    def test_key_error_subclasses_keep_plain_message(self):
        self.assertEqual("no such alias", str(UnknownNameError("no such alias")))

    def test_atom_fault_describes_cause(self):
        fault = AtomFault("kv/0", RuntimeError("boom"))
        self.assertEqual("atom 'kv/0' faulted: RuntimeError: boom", str(fault))
        self.assertIsInstance(fault, RadonError)

    def test_exit_is_not_an_exception(self):
        self.assertFalse(issubclass(AtomExit, Exception))
        self.assertTrue(issubclass(StorageLimitError, RadonError))


if __name__ == '__main__':
    unittest.main()

# Repository:   https://github.com/PyRadon
# File Name:    test/test_color_scheme.py
# Description:  Unit tests for console colour schemes
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
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from colorama import Back, Fore, Style

from radon.color_scheme import FACTORY_CONFIG_DIR, ColorScheme, Field, get_user_config_dir
from radon.log_levels import LogLevel


class ColorSchemeTests(unittest.TestCase):

    def test_factory_files_cover_every_field_and_level(self):
        for default, file_name in ColorScheme.scheme_files.items():
            with self.subTest(scheme=default.name):
                data = json.loads((FACTORY_CONFIG_DIR / "colors" / "factory" / file_name).read_text())
                expected = {f.name.lower() for f in Field} | {level.name.lower() for level in LogLevel}
                self.assertEqual(expected, set(data))

    def test_get_with_log_level_enum(self):
        """Different levels get different colours."""
        cs = ColorScheme(ColorScheme.Default.COLOR, use_user_config=False)
        self.assertTrue(cs.get(LogLevel.INFO).startswith('\x1b['))
        self.assertNotEqual(cs.get(LogLevel.DEBUG), cs.get(LogLevel.INFO))
        self.assertNotEqual(cs.get(LogLevel.INFO), cs.get(LogLevel.ERROR))
        self.assertIn(Fore.MAGENTA, cs.get(LogLevel.LIFECYCLE))
        self.assertIn(Back.RED, cs.get("fatal"))

    def test_get_with_field_enum(self):
        cs = ColorScheme(ColorScheme.Default.COLOR, use_user_config=False)
        self.assertEqual(Style.NORMAL + Fore.CYAN, cs.get(Field.TIMESTAMP))
        self.assertEqual(Style.BRIGHT + Fore.CYAN, cs.get("timestamp", style=Style.BRIGHT))

    def test_plain_scheme(self):
        cs = ColorScheme(ColorScheme.Default.PLAIN_TEXT)
        self.assertTrue(cs.is_plain)
        self.assertEqual("", cs.get(LogLevel.ERROR))
        self.assertEqual("text", cs.paint("error", "text"))

    def test_paint_resets(self):
        cs = ColorScheme(ColorScheme.Default.BLACK_AND_WHITE, use_user_config=False)
        painted = cs.paint(LogLevel.INFO, "hello")
        self.assertTrue(painted.endswith("hello" + Style.RESET_ALL))
        self.assertFalse(cs.is_plain)

    def test_unknown_key_is_uncoloured(self):
        cs = ColorScheme(use_user_config=False)
        self.assertEqual("", cs.get("no-such-field"))

    def test_invalid_default(self):
        with self.assertRaises(ValueError):
            ColorScheme("COLOR")

    def test_explicit_file_wins(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "scheme.json"
            path.write_text(json.dumps({"info": {"foreground": "BLUE", "background": "WHITE"}}))
            cs = ColorScheme(colorscheme_json=path)
            self.assertEqual(Style.NORMAL + Fore.BLUE + Back.WHITE, cs.get("info"))
            self.assertEqual("", cs.get("error"))

    def test_user_config_dir_honours_xdg(self):
        with tempfile.TemporaryDirectory() as tmp, patch.dict(os.environ, {"XDG_CONFIG_HOME": tmp}), \
                patch("radon.color_scheme.platform.system", return_value="Linux"):
            directory = get_user_config_dir(create=False)
            self.assertEqual(Path(tmp) / "radon", directory)
            self.assertFalse(directory.exists())
            self.assertTrue(get_user_config_dir().exists())

    def test_user_active_scheme(self):
        with tempfile.TemporaryDirectory() as tmp, patch.dict(os.environ, {"XDG_CONFIG_HOME": tmp}), \
                patch("radon.color_scheme.platform.system", return_value="Linux"):
            active = Path(tmp) / "radon" / "colors" / "active"
            active.parent.mkdir(parents=True)
            active.write_text(json.dumps({"error": {"foreground": "GREEN", "background": None}}))
            self.assertEqual(Style.NORMAL + Fore.GREEN, ColorScheme().get("error"))
            self.assertNotEqual(Style.NORMAL + Fore.GREEN, ColorScheme(use_user_config=False).get("error"))


if __name__ == '__main__':
    unittest.main()

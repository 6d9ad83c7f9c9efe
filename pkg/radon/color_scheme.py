# Repository:   https://github.com/PyRadon
# File Name:    radon/color_scheme.py
# Description:  Console colours for runtime log lines
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

import json
import os
import platform
from enum import auto
from pathlib import Path

from colorama import init as colorama_init, Fore, Back, Style
from fundamentals.extended_enum import ExtendedEnum

from radon.log_levels import LogLevel

colorama_init()

FACTORY_CONFIG_DIR = Path(__file__).parent / "config"


def get_user_config_dir(create: bool = True) -> Path:
    """Get the user configuration directory.

    Cross-platform: Uses appropriate user config directory for each OS:
    - Linux: ~/.config/radon (or $XDG_CONFIG_HOME/radon)
    - macOS: ~/.config/radon
    - Windows: %APPDATA%/radon

    :param create: create the directory if it does not exist yet
    :return: the directory path
    """
    if platform.system() == 'Windows':
        config_home = os.environ.get('APPDATA', os.path.expanduser('~'))
    else:
        config_home = os.environ.get('XDG_CONFIG_HOME', os.path.expanduser('~/.config'))
    user_config_dir = Path(config_home) / 'radon'

    if create and not user_config_dir.exists():
        user_config_dir.mkdir(parents=True, exist_ok=True)
    return user_config_dir


class Field(ExtendedEnum):
    """Parts of a log line that carry their own colour."""
    OPERATOR = auto()
    TIMESTAMP = auto()
    LEVEL = auto()
    MESSAGE = auto()
    KEY = auto()
    VALUE = auto()


class ColorScheme:
    """
    Colour lookup for console log lines.

    Each entry of the scheme JSON names a foreground and background colorama colour, keyed either by a
    Field name or by a log level name:

    {
      "operator": {"foreground": "YELLOW", "background": null},
      "key": {"foreground": "CYAN", "background": null},
      "lifecycle": {"foreground": "MAGENTA", "background": null},
      ...
    }

    A scheme found at ~/.config/radon/colors/active wins over the factory schemes.
    """

    class Default(ExtendedEnum):
        COLOR = auto()
        BLACK_AND_WHITE = auto()
        PLAIN_TEXT = auto()

    scheme_files = {
        Default.COLOR: "display_dark_bg_color.json",
        Default.BLACK_AND_WHITE: "display_dark_bg_bw.json",
        Default.PLAIN_TEXT: "display_plain.json",
    }

    def __init__(self,
                 default_scheme: ColorScheme.Default | None = None,
                 colorscheme_json: Path | None = None,
                 use_user_config: bool = True):
        """
        :param default_scheme: the factory scheme to fall back to (COLOR when None)
        :param colorscheme_json: explicit scheme file, overrides everything else
        :param use_user_config: consult ~/.config/radon/colors/active
        """
        if default_scheme is None:
            default_scheme = ColorScheme.Default.COLOR
        if not isinstance(default_scheme, ColorScheme.Default):
            raise ValueError(f"Invalid Default-color-scheme: '{default_scheme}'")
        self.default_scheme = default_scheme
        self.all_levels = [f.name.lower() for f in Field] + [level.name.lower() for level in LogLevel]
        self._colors: dict[str, tuple[str, str]] = {name: ("", "") for name in self.all_levels}

        if colorscheme_json is not None:
            self._load_from_config(Path(colorscheme_json))
            return
        if use_user_config and default_scheme != ColorScheme.Default.PLAIN_TEXT:
            user_active = get_user_config_dir(create=False) / "colors" / "active"
            if user_active.exists():
                try:
                    self._load_from_config(user_active)
                    return
                except (OSError, ValueError, AttributeError):
                    pass
        self._load_from_config(FACTORY_CONFIG_DIR / "colors" / "factory" / self.scheme_files[default_scheme])

    @property
    def is_plain(self) -> bool:
        return all(fg == "" and bg == "" for fg, bg in self._colors.values())

    def get(self, level: str | LogLevel | Field, style: str = Style.NORMAL) -> str:
        """
        Get the combined ANSI colour code for the given level or field.

        :param level: the level name as string, LogLevel enum, or Field enum
        :param style: ANSI style to apply
        :return: combined ANSI colour code, empty for plain schemes
        """
        if isinstance(level, (LogLevel, Field)):
            level_str = level.name.lower()
        else:
            level_str = str(level).lower()
        foreground, background = self._colors.get(level_str, ("", ""))
        if not foreground and not background:
            return ""
        return (style or Style.NORMAL) + foreground + background

    def paint(self, level: str | LogLevel | Field, text: str, style: str = Style.NORMAL) -> str:
        """Wrap text in the colour of the given level, resetting afterwards."""
        code = self.get(level, style)
        return f"{code}{text}{Style.RESET_ALL}" if code else text

    def _load_from_config(self, config_file: Path) -> None:
        with open(config_file, encoding="utf-8") as f:
            data = json.load(f)

        for level_name, colors in data.items():
            fg_str = colors.get("foreground")
            bg_str = colors.get("background")
            foreground = getattr(Fore, fg_str) if fg_str else ""
            background = getattr(Back, bg_str) if bg_str else ""
            self._colors[level_name.lower()] = (foreground, background)

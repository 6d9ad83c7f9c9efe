# Repository:   https://github.com/PyRadon
# File Name:    radon/apps/echo.py
# Description:  Echo atom behind the radon-echo baseline
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
# @date: 2026-04-14
# @author: Dieter J Kybelksties

from __future__ import annotations

from radon.atomlib import serve_events
from radon.engine import RuntimeContext
from radon.model import Event


async def echo_main(ctx: RuntimeContext, event: Event | None) -> None:
    """Answer every event with its own body."""

    async def handle(request: Event) -> None:
        ctx.respond(request, 200, request.body)

    await serve_events(ctx, event, handle)

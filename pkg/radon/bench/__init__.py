# Repository:   https://github.com/PyRadon
# File Name:    radon/bench/__init__.py
# Description:  Benchmark harness
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
# @date: 2026-04-17
# @author: Dieter J Kybelksties

from .workload import ClientWorkload, EchoMapper, KvMapper, Operation, OpKind, WorkloadSpec, load_spec
from .runner import RunReport, run_workload
from .report import CSV_COLUMNS, render_charts, render_csv, render_table

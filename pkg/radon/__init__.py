# Repository:   https://github.com/PyRadon
# File Name:    radon/__init__.py
# Description:  Radon actor runtime
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

__version__ = "0.3.0"

from .error import (AtomFault, ConfigurationError, NameConflictError, PayloadTooLargeError, RadonError,
                    UnknownDestinationError)
from .log_levels import Lifecycle, LogLevel
from .model import (AtomConfiguration, AtomKind, AliasAll, Envelope, Event, EventRoute, Exact, NameSet, NameSpace,
                    NodeInfo, OnDemand, OnDemandExpire, One, Ordering, RecoveryPolicy, RoundRobin,
                    parse_configuration, validate_name)
from .runtime_logger import (configure_logging, get_logger, log_debug, log_error, log_info, log_lifecycle,
                             log_warning)
from .engine import AtomDefinition, Engine, InProcessModuleEngine, RuntimeContext
from .node import RadonNode

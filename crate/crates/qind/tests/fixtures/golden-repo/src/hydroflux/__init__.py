# SPDX-FileCopyrightText: 2024 Hydroflux contributors
# SPDX-License-Identifier: MIT
from .core import estimate

__all__ = ["estimate"]

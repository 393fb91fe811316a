# -*- coding: utf-8 -*-

# Copyright (c) 2025 geosched developers
#
# Licensed under the terms of the GNU Lesser General Public License v3
# (see geosched/__init__.py for details)

import sys


if __name__ == '__main__':
    from geosched.console import start
    try:
        sys.exit(start.main())
    except Exception:
        # stderr may have been redirected by the command
        import traceback
        traceback.print_exc(file=sys.__stderr__)
        sys.__stderr__.flush()
        raise

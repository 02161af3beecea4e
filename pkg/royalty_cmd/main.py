# Copyright 2023 The Royalty-Cmd Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#    http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Royalty-Cmd application

Music Royalty Catalog Valuation Command Processor

This module is connected to the `royalty` command via a console_scripts
entry point in setup.py.
The sub-commands are plug-ins registered in the `royalty.app` entry point
group.
"""
import logging
import sys

import cliff.app
import cliff.commandmanager

from royalty_cmd import __pkg_metadata__
from royalty_cmd.core import ingest, market

logger = logging.getLogger(__name__)

#: Input files read by the sub-commands, and their CSV headers.
DATA_FILES = (
    ('cashflows', ingest.CASHFLOWS_HEADER),
    ('assets', ingest.ASSETS_HEADER),
    ('quotes', market.QUOTES_HEADER),
)


def epilog():
    """Return the help text that follows the option list of `royalty -h`.

    It lists the headers of the input files and the exit statuses.
    """
    files = '; '.join(
        '{} CSV: {}'.format(name, ','.join(header))
        for name, header in DATA_FILES
    )
    return (
        'Input files - {}. '
        'Exit status is 0 on success, '
        '2 when a sub-command has no result to give, '
        'and 1 for invalid input.'.format(files)
    )


class RoyaltyApp(cliff.app.App):
    CONSOLE_MESSAGE_FORMAT = '%(name)s %(levelname)s: %(message)s'

    def __init__(self):
        super(RoyaltyApp, self).__init__(
            description=__pkg_metadata__.DESCRIPTION,
            version=__pkg_metadata__.VERSION,
            command_manager=cliff.commandmanager.CommandManager(
                'royalty.app', convert_underscores=False
            ),
            stderr=sys.stdout,
        )

    def build_option_parser(self, description, version, argparse_kwargs=None):
        argparse_kwargs = dict(argparse_kwargs or {})
        argparse_kwargs.setdefault('epilog', epilog())
        return super(RoyaltyApp, self).build_option_parser(
            description, version, argparse_kwargs
        )

    def initialize_app(self, argv):
        """Log the installed sub-commands before one of them runs.
        """
        commands = sorted(name for name, _ in self.command_manager)
        logger.debug(
            '{} {} sub-commands: {}'.format(
                __pkg_metadata__.PROJECT, __pkg_metadata__.VERSION,
                ', '.join(commands)
            )
        )


def main(argv=sys.argv[1:]):
    app = RoyaltyApp()
    return app.run(argv)


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))

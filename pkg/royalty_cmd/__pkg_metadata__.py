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
"""Royalty-Cmd -- music royalty catalog valuation command processor
"""
PROJECT = 'Royalty-Cmd'
DESCRIPTION = 'Music Royalty Catalog Valuation Command Processor'
VERSION = '0.1'
DEV_STATUS = '1 - Development'

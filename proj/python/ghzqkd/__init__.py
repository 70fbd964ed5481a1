# Copyright 2026 The ghzqkd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""GHZ-based quantum authentication and key distribution simulator."""

import json

from ._ghzqkd import (  # noqa: F401
    AttackParams,
    AttackPlacement,
    BellOutcome,
    ConfigError,
    EncodingOp,
    Inference,
    ProbeMode,
    Registry,
    RegistryError,
    ValidationError,
    XOutcome,
    auth_detection_average,
    auth_detection_c_bits,
    auth_detection_closed_form,
    auth_detection_exact,
    infer_bob_bit,
    kd_error_average,
    kd_error_closed_form,
    kd_error_exact,
    make_attack,
    monte_carlo_detection,
    privacy_amplify,
    sweep_csv,
    table1_distribution,
    trent_key_ignorance,
    validate_attack,
)
from . import _ghzqkd


def run_session(config, registry):
    """Run one session. `config` is a dict in the run-configuration schema."""
    return json.loads(_ghzqkd.run_session_json(json.dumps(config), registry))


def table1():
    return json.loads(_ghzqkd.table1_json())

# hyperdenoise
# Copyright 2025 Denys Karmazeniuk
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from hyperdenoise.resources.bench import BenchResource as BenchResource
from hyperdenoise.resources.denoise import DenoiseResource as DenoiseResource
from hyperdenoise.resources.images import ImageResource as ImageResource
from hyperdenoise.resources.noise_stats import NoiseStatsResource as NoiseStatsResource
from hyperdenoise.resources.risk import RiskResource as RiskResource

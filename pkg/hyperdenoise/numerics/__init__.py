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

from hyperdenoise.numerics.bench import *
from hyperdenoise.numerics.grid import *
from hyperdenoise.numerics.noise_stats import *
from hyperdenoise.numerics.quadrature import *
from hyperdenoise.numerics.risk import *
from hyperdenoise.numerics.shrinkage import *
from hyperdenoise.numerics.wavelet import *

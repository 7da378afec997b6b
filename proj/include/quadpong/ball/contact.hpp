// Copyright 2026 Quadpong Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "quadpong/ball/types.hpp"

namespace quadpong::ball {

/// Rigid impulse bounce: normal restitution plus a Coulomb stick/slide
/// tangential impulse acting at the contact point, which couples tangential
/// velocity and spin. Requires an approaching ball:
/// (v - surface_velocity) . normal < 0.
BallState impulse_contact(const BallState& s, const ContactSurface& surf,
                          const BallPhysicalParams& ball);

}  // namespace quadpong::ball

// Shared kernel sources used across the test suites.
#pragma once

namespace sodac::testing {

// 3x3 separable blur, float data, unroll 16.
inline constexpr const char* kBlurSource = R"(kernel: blur
unroll factor: 16
iterate factor: 1
input float: image(3000, *)
local float: blur_x(0, 0) = (image(0, 0) + image(1, 0) + image(2, 0)) / 3
output float: blur_y(0, 0) = (blur_x(0, 0) + blur_x(0, 1) + blur_x(0, 2)) / 3
)";

// Integer variant: plain 9-tap sum (no division), bit-exact everywhere.
inline constexpr const char* kBlurIntSource = R"(kernel: blur_int
unroll factor: 4
iterate factor: 1
input int32: image(3000, *)
local int32: blur_x(0, 0) = image(0, 0) + image(1, 0) + image(2, 0)
output int32: blur_y(0, 0) = blur_x(0, 0) + blur_x(0, 1) + blur_x(0, 2)
)";

inline constexpr const char* kIdentitySource = R"(kernel: ident
unroll factor: 1
iterate factor: 1
input int32: src(64, *)
output int32: dst(0, 0) = src(0, 0)
)";

}  // namespace sodac::testing

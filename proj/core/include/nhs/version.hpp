// Copyright (c) 2026 The nhs authors. Licensed under the MIT License.

#pragma once

namespace nhs {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "nhs/1";

}  // namespace nhs

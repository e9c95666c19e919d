// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <string_view>

// Built-in copies of the files under data/.
namespace clintext::resources {

std::string_view abbreviations();
std::string_view mask_terms();
std::string_view lemma_exceptions();
std::string_view filler();
std::string_view cues_positive();
std::string_view cues_negative();

}  // namespace clintext::resources

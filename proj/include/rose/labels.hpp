// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace rose {

/// The three refactoring classes. The integer codes are stable and are the
/// class axis everywhere: logits, confusion matrices, checkpoints.
enum class RefactoringLabel : int {
    ExtractMethod = 0,
    MoveClass = 1,
    PullUpMethod = 2,
};

constexpr int kNumClasses = 3;

constexpr std::array<RefactoringLabel, kNumClasses> kAllLabels = {
    RefactoringLabel::ExtractMethod,
    RefactoringLabel::MoveClass,
    RefactoringLabel::PullUpMethod,
};

/// Architectural smells handled by the pipeline; each has exactly one
/// canonical repair.
enum class SmellKind : int {
    GodClass = 0,
    CyclicDependency = 1,
    HubLikeDependency = 2,
};

/// Canonical smell -> refactoring mapping.
constexpr RefactoringLabel smell_to_refactoring(SmellKind smell) {
    switch (smell) {
    case SmellKind::GodClass:
        return RefactoringLabel::ExtractMethod;
    case SmellKind::CyclicDependency:
        return RefactoringLabel::MoveClass;
    case SmellKind::HubLikeDependency:
        return RefactoringLabel::PullUpMethod;
    }
    return RefactoringLabel::ExtractMethod; // unreachable on valid input
}

/// Canonical file/report spelling: "ExtractMethod" | "MoveClass" | "PullUpMethod".
std::string_view label_name(RefactoringLabel label);

/// Parses a label name. Canonical names are case-sensitive; the spaced
/// aliases ("Extract Method") are accepted on read.
std::optional<RefactoringLabel> parse_label(std::string_view text);

std::string_view smell_name(SmellKind smell);

/// Accepts "GodClass"/"god_class" style spellings.
std::optional<SmellKind> parse_smell(std::string_view text);

} // namespace rose

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/labels.hpp"

namespace rose {

std::string_view label_name(RefactoringLabel label) {
    switch (label) {
    case RefactoringLabel::ExtractMethod:
        return "ExtractMethod";
    case RefactoringLabel::MoveClass:
        return "MoveClass";
    case RefactoringLabel::PullUpMethod:
        return "PullUpMethod";
    }
    return "ExtractMethod";
}

std::optional<RefactoringLabel> parse_label(std::string_view text) {
    if (text == "ExtractMethod" || text == "Extract Method") {
        return RefactoringLabel::ExtractMethod;
    }
    if (text == "MoveClass" || text == "Move Class") {
        return RefactoringLabel::MoveClass;
    }
    if (text == "PullUpMethod" || text == "Pull Up Method") {
        return RefactoringLabel::PullUpMethod;
    }
    return std::nullopt;
}

std::string_view smell_name(SmellKind smell) {
    switch (smell) {
    case SmellKind::GodClass:
        return "GodClass";
    case SmellKind::CyclicDependency:
        return "CyclicDependency";
    case SmellKind::HubLikeDependency:
        return "HubLikeDependency";
    }
    return "GodClass";
}

std::optional<SmellKind> parse_smell(std::string_view text) {
    if (text == "GodClass" || text == "god_class") {
        return SmellKind::GodClass;
    }
    if (text == "CyclicDependency" || text == "cyclic_dependency") {
        return SmellKind::CyclicDependency;
    }
    if (text == "HubLikeDependency" || text == "hub_like_dependency") {
        return SmellKind::HubLikeDependency;
    }
    return std::nullopt;
}

} // namespace rose

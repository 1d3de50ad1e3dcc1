#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetarank/curves.hpp"

namespace thetarank {

/// A curve printed with explicit generators. `n` is the value whose
/// curve has the printed coefficients.
struct PublishedCurve {
    std::string n;
    ThetaParams theta;
    std::string a2;
    std::string a4;
    int rank = 0;
    /// Set where the Selmer rank is stated alongside the curve.
    std::optional<int> selmer;
    std::vector<std::pair<std::string, std::string>> generators;
    /// The n printed in the text when it differs from the n the printed
    /// equation belongs to; empty otherwise.
    std::string printed_n;
};

/// A curve stated only through its Selmer rank and/or rank.
struct PublishedBound {
    std::string n;
    ThetaParams theta;
    std::optional<int> selmer;
    std::optional<int> rank;
};

/// A list of n printed as sharing a property: rank == value, or Selmer
/// rank == value when `is_selmer`.
struct CompanionList {
    std::string label;
    ThetaParams theta;
    bool is_selmer = false;
    int value = 0;
    /// As printed, duplicates included.
    std::vector<std::string> entries;
};

/// Every curve with explicit generators (5 for pi/3, 4 for 2pi/3).
const std::vector<PublishedCurve>& published_curves();
/// Selmer/rank statements without generators, including the small anchors.
const std::vector<PublishedBound>& published_bounds();
const std::vector<CompanionList>& companion_lists();

}  // namespace thetarank

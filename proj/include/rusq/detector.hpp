// detector.hpp
// Photodetector efficiency and photon-number resolution model.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rusq {

/// Number of 50-50 splitting levels in front of threshold detectors, or
/// infinitely many (equivalent to a photon-number-resolving detector).
class BranchingDepth
{
  public:
    constexpr BranchingDepth() = default;
    explicit BranchingDepth(int levels) : levels_(levels)
    {
        if (levels < 0)
            throw std::invalid_argument("branching depth must be >= 0");
    }
    static constexpr BranchingDepth infinite()
    {
        BranchingDepth d;
        d.infinite_ = true;
        return d;
    }

    bool is_infinite() const { return infinite_; }
    int levels() const
    {
        if (infinite_)
            throw std::logic_error("BranchingDepth::levels on infinite depth");
        return levels_;
    }
    /// Probability that two photons entering one tree leave through the same leaf.
    double same_leaf_probability() const
    {
        return infinite_ ? 0.0 : std::ldexp(1.0, -levels_);
    }
    std::string to_string() const { return infinite_ ? "inf" : std::to_string(levels_); }

    /// Parses an integer or "inf".
    static BranchingDepth parse(const std::string& text)
    {
        if (text == "inf" || text == "Inf" || text == "INF")
            return infinite();
        std::size_t used = 0;
        int v = 0;
        try
        {
            v = std::stoi(text, &used);
        }
        catch (const std::exception&)
        {
            throw std::invalid_argument("bad branching depth '" + text + "'");
        }
        if (used != text.size())
            throw std::invalid_argument("bad branching depth '" + text + "'");
        return BranchingDepth(v);
    }

    friend bool operator==(const BranchingDepth& a, const BranchingDepth& b)
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.levels_ == b.levels_);
    }

  private:
    int levels_ = 0;
    bool infinite_ = false;
};

enum class DetectorKind { Threshold, Resolving, Tree };

/*!
 * Detector with efficiency eta and resolution parameter mu: eta*mu is the
 * probability of registering both photons when two reach the same detector.
 * Threshold detectors have mu = 0, resolving detectors mu = eta, and a
 * depth-N tree of threshold detectors behaves as mu = eta (1 - 2^-N).
 */
class DetectorModel
{
  public:
    static DetectorModel threshold(double eta) { return {eta, DetectorKind::Threshold, {}}; }
    static DetectorModel resolving(double eta) { return {eta, DetectorKind::Resolving, {}}; }
    static DetectorModel tree(double eta, BranchingDepth depth)
    {
        return {eta, DetectorKind::Tree, depth};
    }

    double efficiency() const { return eta_; }
    DetectorKind kind() const { return kind_; }
    BranchingDepth depth() const { return depth_; }

    double resolution() const
    {
        switch (kind_)
        {
            case DetectorKind::Threshold: return 0.0;
            case DetectorKind::Resolving: return eta_;
            case DetectorKind::Tree: return eta_ * (1.0 - depth_.same_leaf_probability());
        }
        return 0.0;
    }

    /// Probability of reporting a count of two given that two photons survive.
    double both_registered_probability() const
    {
        switch (kind_)
        {
            case DetectorKind::Threshold: return 0.0;
            case DetectorKind::Resolving: return 1.0;
            case DetectorKind::Tree: return 1.0 - depth_.same_leaf_probability();
        }
        return 0.0;
    }

    std::string kind_name() const
    {
        switch (kind_)
        {
            case DetectorKind::Threshold: return "threshold";
            case DetectorKind::Resolving: return "resolving";
            case DetectorKind::Tree: return "tree(" + depth_.to_string() + ")";
        }
        return "";
    }

  private:
    DetectorModel(double eta, DetectorKind kind, BranchingDepth depth)
        : eta_(eta), kind_(kind), depth_(depth)
    {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }

    double eta_ = 1.0;
    DetectorKind kind_ = DetectorKind::Resolving;
    BranchingDepth depth_{};
};

}  // namespace rusq

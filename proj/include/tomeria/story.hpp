#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tomeria/level_io.hpp"
#include "tomeria/rng.hpp"

namespace tomeria {

struct StoryAttributes {
  std::string emotion;
  std::string location;
  std::string timeOfDay;
  std::string companion;
  std::string dialogueLine;

  friend bool operator==(const StoryAttributes&, const StoryAttributes&) = default;
};

/// Order in which a vision reveals attributes as it gets more detailed.
inline constexpr std::array<std::string_view, 5> kVaguenessOrder = {
    "emotion", "location", "timeOfDay", "companion", "dialogueLine"};

std::string_view attribute_value(const StoryAttributes& a, std::size_t orderIndex);

struct StoryNode {
  std::size_t id = 0;
  int depth = 0;
  StoryAttributes attributes;
  std::string sceneText;
  std::vector<std::string> choiceLabels;  // empty at leaves
};

/// Full b-ary tree in heap order: the children of node n are n*b+1 .. n*b+b.
class StoryTree {
 public:
  static constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 20;

  StoryTree(std::uint64_t seed, int branching, int depth, std::vector<StoryNode> nodes)
      : seed_(seed), branching_(branching), depth_(depth), nodes_(std::move(nodes)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  int branching() const noexcept { return branching_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const StoryNode& node(std::size_t id) const { return nodes_.at(id); }
  const StoryNode& root() const { return nodes_.front(); }
  bool is_leaf(std::size_t id) const { return node(id).depth == depth_; }
  std::size_t child(std::size_t id, int choice) const;

  /// Contiguous id range [first, first + count) of the descendants of `id`
  /// exactly `levels` below it.
  std::pair<std::size_t, std::size_t> descendants(std::size_t id, int levels) const;

 private:
  std::uint64_t seed_;
  int branching_;
  int depth_;
  std::vector<StoryNode> nodes_;
};

/// Deterministic in (seed, branching, depth). Sibling nodes always differ in
/// at least one attribute. capacity error if the tree exceeds nodeCap nodes.
StoryTree generate_story_tree(std::uint64_t seed, int branching, int depth,
                              std::size_t nodeCap = StoryTree::kDefaultNodeCap);

/// Number of attributes a depth-d vision reveals: min(max(1, d-1), 5).
int vagueness_level(int d);
/// b^(d-1): how many distinct futures a depth-d vision could be.
std::uint64_t futures_count(int branching, int d);

struct Vision {
  int subtreeChoice = 0;
  int depth = 1;
  std::vector<std::pair<std::string, std::string>> revealed;  // name, value
  std::uint64_t futuresCount = 1;
  std::size_t sampledNodeId = 0;  // audit only; never shown to the player
};

/// One playthrough. Operations mutate the session and must be serialized.
class StorySession {
 public:
  StorySession(std::shared_ptr<const StoryTree> tree, std::uint64_t sessionSeed);

  const StoryTree& tree() const noexcept { return *tree_; }
  const std::shared_ptr<const StoryTree>& tree_ptr() const noexcept { return tree_; }
  const StoryNode& current() const { return tree_->node(current_); }
  std::uint64_t session_seed() const noexcept { return sessionSeed_; }
  const std::vector<bool>& peeks_used() const noexcept { return peeksUsed_; }
  const std::vector<Vision>& visions() const noexcept { return visions_; }
  const std::vector<int>& history() const noexcept { return history_; }
  const std::vector<std::string>& log() const noexcept { return log_; }
  bool ended() const { return tree_->is_leaf(current_); }
  int remaining_depth() const { return tree_->depth() - current().depth; }

  /// Reveals one uniformly sampled real node d levels into the future within
  /// the chosen subtree. One peek per subtree per decision.
  Vision peek(int choice, int d);
  void choose(int choice);

 private:
  std::shared_ptr<const StoryTree> tree_;
  std::uint64_t sessionSeed_;
  SplitMix64 rng_;
  std::size_t current_ = 0;
  std::vector<bool> peeksUsed_;
  std::vector<Vision> visions_;
  std::vector<int> history_;
  std::vector<std::string> log_;
};

/// Monte-Carlo probability that a depth-d vision comes true when every later
/// choice is made uniformly at random. Expected value b^-(d-1).
double vision_hit_rate(int branching, int d, std::uint64_t trials, std::uint64_t seed = 1);

/// Applies comma-separated actions "peek:<choice>:<d>" / "choose:<choice>".
/// Returns every vision revealed along the way.
std::vector<Vision> run_story_script(StorySession& session, std::string_view script);

Json story_node_to_json(const StoryTree& tree, std::size_t id);
/// Nested {id, attributes, sceneText, children} rooted at the opening scene.
Json story_to_json(const StoryTree& tree);
Json vision_to_json(const Vision& v);

}  // namespace tomeria

#include "tomeria/story.hpp"

#include <algorithm>

#include "tomeria/error.hpp"

namespace tomeria {

namespace {

constexpr std::array<std::string_view, 8> kEmotions = {
    "in tears", "laughing", "anxious", "elated", "furious", "calm", "exhausted", "hopeful"};
constexpr std::array<std::string_view, 8> kLocations = {
    "on a crowded train platform", "in a quiet cafe",  "at the office",  "in a hospital corridor",
    "on a rain-soaked street",     "in a small flat",  "at a riverside bar", "in the back of a taxi"};
constexpr std::array<std::string_view, 6> kTimes = {
    "at dawn", "mid-morning", "at noon", "late in the afternoon", "at dusk", "near midnight"};
constexpr std::array<std::string_view, 6> kCompanions = {
    "alone", "with James", "with Anna", "with an old friend", "with a stranger", "with their sister"};
constexpr std::array<std::string_view, 10> kDialogue = {
    "\"I never thought it would end like this.\"",
    "\"We need to talk about last night.\"",
    "\"Don't tell me you missed it again.\"",
    "\"I can't stop thinking about the letter.\"",
    "\"Let's just forget the whole thing.\"",
    "\"You were right about the job.\"",
    "\"Who gave you this address?\"",
    "\"It's not too late, is it?\"",
    "\"I saw you on the platform.\"",
    "\"Tell me the truth, for once.\""};
constexpr std::array<std::string_view, 10> kChoices = {
    "Run for the train", "Let the train go", "Call an old friend", "Walk home in the rain",
    "Take the job",      "Turn it down",     "Say nothing",        "Tell the truth",
    "Follow the stranger", "Stay where you are"};

template <std::size_t N>
std::string draw(const std::array<std::string_view, N>& list, SplitMix64& rng) {
  return std::string(list[rng.next_below(N)]);
}

StoryAttributes draw_attributes(SplitMix64& rng) {
  StoryAttributes a;
  a.emotion = draw(kEmotions, rng);
  a.location = draw(kLocations, rng);
  a.timeOfDay = draw(kTimes, rng);
  a.companion = draw(kCompanions, rng);
  a.dialogueLine = draw(kDialogue, rng);
  return a;
}

std::string render_scene(const StoryAttributes& a) {
  return "You are " + a.emotion + " " + a.location + " " + a.timeOfDay + ", " + a.companion + ". " +
         a.dialogueLine;
}

std::vector<std::string> draw_choices(int branching, SplitMix64& rng) {
  std::vector<std::string> pool(kChoices.begin(), kChoices.end());
  std::vector<std::string> out;
  for (int i = 0; i < branching; ++i) {
    const std::size_t round = static_cast<std::size_t>(i) / pool.size();
    const std::size_t slot = static_cast<std::size_t>(i) % pool.size();
    if (slot == 0 && round > 0) pool.assign(kChoices.begin(), kChoices.end());
    const std::size_t pick = slot + rng.next_below(pool.size() - slot);
    std::swap(pool[slot], pool[pick]);
    out.push_back(round == 0 ? pool[slot] : pool[slot] + " (" + std::to_string(round + 1) + ")");
  }
  return out;
}

}  // namespace

std::string_view attribute_value(const StoryAttributes& a, std::size_t orderIndex) {
  switch (orderIndex) {
    case 0: return a.emotion;
    case 1: return a.location;
    case 2: return a.timeOfDay;
    case 3: return a.companion;
    case 4: return a.dialogueLine;
    default: fail(ErrorCode::InvalidArgument, "attribute index out of range");
  }
}

std::size_t StoryTree::child(std::size_t id, int choice) const {
  if (choice < 0 || choice >= branching_) fail(ErrorCode::InvalidArgument, "choice out of range");
  if (is_leaf(id)) fail(ErrorCode::StoryEnded, "leaf nodes have no children");
  return id * static_cast<std::size_t>(branching_) + 1 + static_cast<std::size_t>(choice);
}

std::pair<std::size_t, std::size_t> StoryTree::descendants(std::size_t id, int levels) const {
  if (levels < 0 || node(id).depth + levels > depth_) {
    fail(ErrorCode::InvalidArgument, "descendant depth out of range");
  }
  const auto b = static_cast<std::size_t>(branching_);
  std::size_t first = id;
  std::size_t count = 1;
  for (int i = 0; i < levels; ++i) {
    first = first * b + 1;
    count *= b;
  }
  return {first, count};
}

StoryTree generate_story_tree(std::uint64_t seed, int branching, int depth, std::size_t nodeCap) {
  if (branching < 2) fail(ErrorCode::InvalidArgument, "branching must be >= 2");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  std::size_t total = 0;
  std::size_t level = 1;
  for (int d = 0; d <= depth; ++d) {
    total += level;
    if (total > nodeCap) fail(ErrorCode::Capacity, "story tree exceeds node cap");
    if (d < depth) level *= static_cast<std::size_t>(branching);
  }

  SplitMix64 rng(seed);
  std::vector<StoryNode> nodes(total);
  int nodeDepth = 0;
  std::size_t levelEnd = 1;
  std::size_t levelSize = 1;
  for (std::size_t id = 0; id < total; ++id) {
    if (id == levelEnd) {
      ++nodeDepth;
      levelSize *= static_cast<std::size_t>(branching);
      levelEnd += levelSize;
    }
    StoryNode& n = nodes[id];
    n.id = id;
    n.depth = nodeDepth;
    // Earlier siblings share the parent; redraw until this node is distinct.
    const std::size_t firstSibling =
        id == 0 ? 0 : ((id - 1) / static_cast<std::size_t>(branching)) * branching + 1;
    for (;;) {
      n.attributes = draw_attributes(rng);
      bool clash = false;
      for (std::size_t s = firstSibling; s < id; ++s) clash |= nodes[s].attributes == n.attributes;
      if (!clash) break;
    }
    n.sceneText = render_scene(n.attributes);
    if (nodeDepth < depth) n.choiceLabels = draw_choices(branching, rng);
  }
  return StoryTree(seed, branching, depth, std::move(nodes));
}

int vagueness_level(int d) { return std::min(std::max(1, d - 1), 5); }

std::uint64_t futures_count(int branching, int d) {
  if (branching < 1 || d < 1) fail(ErrorCode::InvalidArgument, "futures_count needs b >= 1, d >= 1");
  std::uint64_t n = 1;
  for (int i = 1; i < d; ++i) n *= static_cast<std::uint64_t>(branching);
  return n;
}

StorySession::StorySession(std::shared_ptr<const StoryTree> tree, std::uint64_t sessionSeed)
    : tree_(std::move(tree)), sessionSeed_(sessionSeed), rng_(sessionSeed) {
  if (!tree_) fail(ErrorCode::InvalidArgument, "null story tree");
  peeksUsed_.assign(static_cast<std::size_t>(tree_->branching()), false);
}

Vision StorySession::peek(int choice, int d) {
  if (ended()) fail(ErrorCode::StoryEnded, "the story has already ended");
  if (choice < 0 || choice >= tree_->branching()) fail(ErrorCode::InvalidArgument, "choice out of range");
  if (peeksUsed_[static_cast<std::size_t>(choice)]) {
    fail(ErrorCode::PeekBudgetExhausted,
         "already peeked into branch " + std::to_string(choice) + " at this decision");
  }
  if (d < 1 || d > remaining_depth()) {
    fail(ErrorCode::InvalidArgument, "vision depth must lie in [1," + std::to_string(remaining_depth()) + "]");
  }
  const std::size_t subtree = tree_->child(current_, choice);
  const auto [first, count] = tree_->descendants(subtree, d - 1);
  const std::size_t sampled = first + rng_.next_below(count);

  Vision v;
  v.subtreeChoice = choice;
  v.depth = d;
  v.futuresCount = futures_count(tree_->branching(), d);
  v.sampledNodeId = sampled;
  const int k = vagueness_level(d);
  for (int i = 0; i < k; ++i) {
    v.revealed.emplace_back(std::string(kVaguenessOrder[static_cast<std::size_t>(i)]),
                            std::string(attribute_value(tree_->node(sampled).attributes,
                                                        static_cast<std::size_t>(i))));
  }
  peeksUsed_[static_cast<std::size_t>(choice)] = true;
  visions_.push_back(v);
  log_.push_back("PEEK choice=" + std::to_string(choice) + " d=" + std::to_string(d) +
                 " reveals=" + std::to_string(k));
  return v;
}

void StorySession::choose(int choice) {
  if (ended()) fail(ErrorCode::StoryEnded, "the story has already ended");
  current_ = tree_->child(current_, choice);
  std::fill(peeksUsed_.begin(), peeksUsed_.end(), false);
  visions_.clear();
  history_.push_back(choice);
  log_.push_back("CHOOSE " + std::to_string(choice));
}

double vision_hit_rate(int branching, int d, std::uint64_t trials, std::uint64_t seed) {
  if (branching < 2 || d < 1) fail(ErrorCode::InvalidArgument, "hit rate needs b >= 2 and d >= 1");
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  const std::uint64_t futures = futures_count(branching, d);
  SplitMix64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t target = rng.next_below(futures);
    std::uint64_t reached = 0;
    for (int step = 1; step < d; ++step) {
      reached = reached * static_cast<std::uint64_t>(branching) +
                rng.next_below(static_cast<std::uint64_t>(branching));
    }
    hits += reached == target ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

namespace {

int script_int(std::string_view token) {
  int v = 0;
  if (token.empty() || token.size() > 6) fail(ErrorCode::InvalidArgument, "story script: bad number");
  for (char c : token) {
    if (c < '0' || c > '9') fail(ErrorCode::InvalidArgument, "story script: bad number");
    v = v * 10 + (c - '0');
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::vector<Vision> run_story_script(StorySession& session, std::string_view script) {
  std::vector<Vision> visions;
  if (script.empty()) return visions;
  for (std::string_view action : split(script, ',')) {
    const auto parts = split(action, ':');
    if (parts[0] == "peek" && parts.size() == 3) {
      visions.push_back(session.peek(script_int(parts[1]), script_int(parts[2])));
    } else if (parts[0] == "choose" && parts.size() == 2) {
      session.choose(script_int(parts[1]));
    } else {
      fail(ErrorCode::InvalidArgument, "story script: cannot parse \"" + std::string(action) + "\"");
    }
  }
  return visions;
}

Json story_node_to_json(const StoryTree& tree, std::size_t id) {
  const StoryNode& n = tree.node(id);
  Json j;
  j["id"] = n.id;
  Json attrs;
  attrs["emotion"] = n.attributes.emotion;
  attrs["location"] = n.attributes.location;
  attrs["timeOfDay"] = n.attributes.timeOfDay;
  attrs["companion"] = n.attributes.companion;
  attrs["dialogueLine"] = n.attributes.dialogueLine;
  j["attributes"] = std::move(attrs);
  j["sceneText"] = n.sceneText;
  Json children = Json::array();
  if (!tree.is_leaf(id)) {
    for (int c = 0; c < tree.branching(); ++c) children.push_back(story_node_to_json(tree, tree.child(id, c)));
  }
  j["children"] = std::move(children);
  return j;
}

Json story_to_json(const StoryTree& tree) { return story_node_to_json(tree, 0); }

Json vision_to_json(const Vision& v) {
  Json j;
  j["choice"] = v.subtreeChoice;
  j["d"] = v.depth;
  Json revealed;
  for (const auto& [name, value] : v.revealed) revealed[name] = value;
  j["revealed"] = std::move(revealed);
  j["futuresCount"] = v.futuresCount;
  j["label"] = "1 of " + std::to_string(v.futuresCount) + (v.futuresCount == 1 ? " future" : " futures");
  return j;
}

}  // namespace tomeria

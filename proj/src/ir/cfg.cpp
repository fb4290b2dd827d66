#include "irenergy/ir/cfg.hpp"

#include <algorithm>
#include <functional>

namespace irenergy::ir {

namespace {

// Successors without validating labels; unknown targets are dropped.
std::vector<std::string> raw_successors(const Function& f, const Block& b) {
  std::vector<std::string> out;
  const Instruction* term = b.terminator();
  if (!term)
    return out;
  for (const auto& t : term->targets)
    if (f.find_block(t.label) &&
        std::find(out.begin(), out.end(), t.label) == out.end())
      out.push_back(t.label);
  return out;
}

} // namespace

SuccessorMap build_cfg(const Function& f) {
  SuccessorMap next;
  for (const auto& b : f.blocks) {
    auto& succ = next[b.label];
    const Instruction* term = b.terminator();
    if (!term)
      continue;
    for (const auto& t : term->targets) {
      if (!f.find_block(t.label))
        throw Error("cfg", "branch to undefined label %" + t.label + " in @" + f.name,
                    term->loc);
      succ.insert(t.label);
    }
  }
  return next;
}

std::map<std::string, std::vector<std::string>> predecessors(const Function& f) {
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto& b : f.blocks)
    preds[b.label];
  for (const auto& b : f.blocks)
    for (const auto& s : raw_successors(f, b))
      preds[s].push_back(b.label);
  return preds;
}

std::vector<std::string> reverse_postorder(const Function& f) {
  std::vector<std::string> post;
  if (f.blocks.empty())
    return post;
  std::set<std::string> seen;
  std::function<void(const Block&)> visit = [&](const Block& b) {
    seen.insert(b.label);
    for (const auto& s : raw_successors(f, b))
      if (!seen.count(s))
        visit(*f.find_block(s));
    post.push_back(b.label);
  };
  visit(f.blocks.front());
  return {post.rbegin(), post.rend()};
}

std::set<std::string> reachable(const Function& f) {
  auto rpo = reverse_postorder(f);
  return {rpo.begin(), rpo.end()};
}

std::map<std::string, std::set<std::string>> dominators(const Function& f) {
  std::map<std::string, std::set<std::string>> dom;
  auto rpo = reverse_postorder(f);
  if (rpo.empty())
    return dom;
  std::set<std::string> all(rpo.begin(), rpo.end());
  auto preds = predecessors(f);
  for (const auto& l : rpo)
    dom[l] = all;
  dom[rpo.front()] = {rpo.front()};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 1; i < rpo.size(); ++i) {
      const auto& l = rpo[i];
      std::set<std::string> meet;
      bool first = true;
      for (const auto& p : preds[l]) {
        if (!all.count(p))
          continue;
        if (first) {
          meet = dom[p];
          first = false;
        } else {
          std::set<std::string> inter;
          for (const auto& x : meet)
            if (dom[p].count(x))
              inter.insert(x);
          meet = std::move(inter);
        }
      }
      meet.insert(l);
      if (meet != dom[l]) {
        dom[l] = std::move(meet);
        changed = true;
      }
    }
  }
  return dom;
}

} // namespace irenergy::ir

// Copyright 2026 The DNL Saliency Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dnl/instrument.hpp"

namespace dnl {
namespace {

thread_local OpCounter* g_active = nullptr;

}  // namespace

OpCounter::Entry& OpCounter::current() {
  const std::string& name = stack_.empty() ? std::string("<unscoped>") : stack_.back();
  auto it = index_.find(name);
  if (it == index_.end()) {
    it = index_.emplace(name, entries_.size()).first;
    entries_.push_back(Entry{name, 0, 0});
  }
  return entries_[it->second];
}

void OpCounter::add_madds(std::uint64_t n) { current().madds += n; }

void OpCounter::add_params(std::uint64_t n) { current().params += n; }

void OpCounter::push_layer(std::string name) {
  stack_.push_back(std::move(name));
  current();
}

void OpCounter::pop_layer() {
  if (!stack_.empty()) stack_.pop_back();
}

std::uint64_t OpCounter::total_madds() const {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.madds;
  return total;
}

CountingScope::CountingScope(OpCounter& counter) : previous_(g_active) { g_active = &counter; }

CountingScope::~CountingScope() { g_active = previous_; }

LayerScope::LayerScope(const std::string& name, std::uint64_t params) : counter_(g_active) {
  if (counter_ == nullptr) return;
  counter_->push_layer(name);
  counter_->add_params(params);
}

LayerScope::~LayerScope() {
  if (counter_ != nullptr) counter_->pop_layer();
}

namespace instrument {

void record_madds(std::uint64_t n) {
  if (g_active != nullptr) g_active->add_madds(n);
}

bool active() { return g_active != nullptr; }

}  // namespace instrument
}  // namespace dnl

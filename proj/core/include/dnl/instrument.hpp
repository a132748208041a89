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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dnl {

// Collects multiply-add counts reported by kernels while it is active on the
// current thread. Counts are attributed to the innermost open LayerScope, or
// to "<unscoped>" when none is open.
class OpCounter {
 public:
  struct Entry {
    std::string layer;
    std::uint64_t madds = 0;
    std::uint64_t params = 0;
  };

  void add_madds(std::uint64_t n);
  void add_params(std::uint64_t n);

  void push_layer(std::string name);
  void pop_layer();

  std::uint64_t total_madds() const;
  // Entries in first-seen order.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Entry& current();

  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> stack_;
};

// Installs `counter` as the active counter for this thread until destroyed.
class CountingScope {
 public:
  explicit CountingScope(OpCounter& counter);
  ~CountingScope();
  CountingScope(const CountingScope&) = delete;
  CountingScope& operator=(const CountingScope&) = delete;

 private:
  OpCounter* previous_;
};

// Names the layer that subsequent kernel work belongs to. A no-op when no
// counter is active. `params` is the learnable scalar count the layer reads.
class LayerScope {
 public:
  explicit LayerScope(const std::string& name, std::uint64_t params = 0);
  ~LayerScope();
  LayerScope(const LayerScope&) = delete;
  LayerScope& operator=(const LayerScope&) = delete;

 private:
  OpCounter* counter_;
};

namespace instrument {

// Called by kernels for the work they actually execute.
void record_madds(std::uint64_t n);

bool active();

}  // namespace instrument
}  // namespace dnl

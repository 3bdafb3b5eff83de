// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ectsim {

// Static round-robin parallel loop: item i runs on worker i % workers.
// The assignment is deterministic, so the set of items each worker touches
// does not depend on scheduling; workers == 1 runs inline on the caller.
inline void parallel_for(int n_items, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1 || n_items <= 1) {
    for (int i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&fn, n_items, workers, w]() {
      for (int i = w; i < n_items; i += workers) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace ectsim

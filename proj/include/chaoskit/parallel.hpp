#pragma once

namespace chaoskit {

/// Caps the worker count of every parallel region that follows.
void set_thread_limit(int threads);
int thread_limit();

}  // namespace chaoskit

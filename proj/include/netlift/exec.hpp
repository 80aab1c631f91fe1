#pragma once

namespace netlift {

// Kernels that have an OpenMP path keep the serial loop as the reference;
// both must produce identical output.
enum class Exec { Serial, Parallel };

// Threads used for Exec::Parallel regions; <= 0 leaves the OpenMP default.
void set_thread_count(int n);
int thread_count();

}  // namespace netlift

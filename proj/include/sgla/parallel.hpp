#pragma once

namespace sgla::parallel {

// Number of OpenMP threads library kernels may use. Defaults to the
// MVAG_THREADS environment variable when set, else the OpenMP default.
int thread_count();

// Overrides the thread cap for the whole process. Values < 1 reset to default.
void set_thread_count(int threads);

// Forces single-threaded, bit-reproducible execution of every kernel.
void set_serial(bool serial);
bool serial();

}  // namespace sgla::parallel

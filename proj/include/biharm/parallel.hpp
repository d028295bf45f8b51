#pragma once

#include <cstddef>
#include <functional>

namespace biharm {

/// Worker count used by parallel_for; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [begin, end), split into contiguous blocks across
/// workers. Bodies must write only to slots owned by i. Nested calls from a
/// worker run serially.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace biharm

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace cexplore {

// Dense integer identifier tagged by what it indexes.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using StateId = Id<struct StateTag>;
using EventId = Id<struct EventTag>;
using TypeId = Id<struct TypeTag>;
using PropId = Id<struct PropTag>;

}  // namespace cexplore

template <class Tag>
struct std::hash<cexplore::Id<Tag>> {
  std::size_t operator()(cexplore::Id<Tag> id) const noexcept { return id.value; }
};

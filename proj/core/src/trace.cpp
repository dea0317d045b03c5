#include "spinlever/trace.hpp"

#include "spinlever/errors.hpp"

namespace spinlever {

SignalTrace::SignalTrace(std::string abscissa_name, std::string abscissa_unit,
                         std::vector<double> grid)
    : abscissa_name_(std::move(abscissa_name)),
      abscissa_unit_(std::move(abscissa_unit)),
      abscissa_(std::move(grid)) {
  if (abscissa_.empty()) throw InputError("SignalTrace: empty abscissa grid");
  for (std::size_t i = 1; i < abscissa_.size(); ++i) {
    if (!(abscissa_[i] > abscissa_[i - 1]))
      throw InputError("SignalTrace: abscissa grid must be strictly ascending");
  }
}

void SignalTrace::add_channel(const std::string& name, const std::string& unit,
                              std::vector<double> values) {
  if (values.size() != abscissa_.size())
    throw InputError("SignalTrace: channel '" + name +
                     "' length does not match abscissa");
  if (has_channel(name))
    throw InputError("SignalTrace: duplicate channel '" + name + "'");
  channels_.push_back({name, unit, std::move(values)});
}

bool SignalTrace::has_channel(const std::string& name) const {
  for (const auto& c : channels_)
    if (c.name == name) return true;
  return false;
}

const std::vector<double>& SignalTrace::channel(const std::string& name) const {
  for (const auto& c : channels_)
    if (c.name == name) return c.values;
  throw InputError("SignalTrace: no channel '" + name + "'");
}

const std::string& SignalTrace::channel_unit(const std::string& name) const {
  for (const auto& c : channels_)
    if (c.name == name) return c.unit;
  throw InputError("SignalTrace: no channel '" + name + "'");
}

}  // namespace spinlever

#pragma once

#include <map>
#include <string>
#include <vector>

namespace spinlever {

// Generic sweep result: one strictly ascending abscissa plus named channels
// of the same length. This is the unit of exchange between the forward
// models, the fitters and the CLI serializers.
class SignalTrace {
 public:
  struct Channel {
    std::string name;
    std::string unit;
    std::vector<double> values;
  };

  SignalTrace() = default;
  SignalTrace(std::string abscissa_name, std::string abscissa_unit,
              std::vector<double> grid);

  void add_channel(const std::string& name, const std::string& unit,
                   std::vector<double> values);

  bool has_channel(const std::string& name) const;
  const std::vector<double>& channel(const std::string& name) const;
  const std::string& channel_unit(const std::string& name) const;

  std::size_t size() const { return abscissa_.size(); }
  const std::vector<double>& abscissa() const { return abscissa_; }
  const std::string& abscissa_name() const { return abscissa_name_; }
  const std::string& abscissa_unit() const { return abscissa_unit_; }
  const std::vector<Channel>& channels() const { return channels_; }

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

 private:
  std::string abscissa_name_;
  std::string abscissa_unit_;
  std::vector<double> abscissa_;
  std::vector<Channel> channels_;
  std::map<std::string, std::string> metadata_;
};

}  // namespace spinlever

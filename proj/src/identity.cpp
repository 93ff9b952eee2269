#include "courtprior/identity.hpp"

#include <algorithm>
#include <cctype>

namespace courtprior {

std::string to_string(Identity id) {
  switch (id) {
    case Identity::Player: return "player";
    case Identity::Perimeter: return "perimeter";
    case Identity::Ball: return "ball";
  }
  return "player";
}

Identity identity_from_string(const std::string& s) {
  if (s == "player") return Identity::Player;
  if (s == "perimeter") return Identity::Perimeter;
  if (s == "ball") return Identity::Ball;
  throw Error("unknown identity '" + s + "'");
}

bool is_ball_category(const std::string& category_name) {
  std::string lower = category_name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "ball";
}

Vec2 bottom_center(const Annotation& ann) {
  return {ann.bbox[0] + ann.bbox[2] / 2.0, ann.bbox[1] + ann.bbox[3]};
}

Identity classify(const Annotation& ann, const CourtRegion& region,
                  const std::string& category_name, double eps) {
  if (is_ball_category(category_name)) return Identity::Ball;
  return contains(region.interior, bottom_center(ann), eps) ? Identity::Player
                                                            : Identity::Perimeter;
}

} // namespace courtprior

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "prs/dataset.hpp"
#include "prs/features.hpp"

namespace prs::testsupport {

// Hand-built design matrix for learner tests; k is taken from the first row.
inline ActionMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& y) {
  ActionMatrix m;
  const int k = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  std::vector<std::string> names;
  for (int j = 0; j < k; ++j) names.push_back("c" + std::to_string(j));
  m.spec = FeatureSpec::custom(names);
  m.X.resize(static_cast<int>(rows.size()), k);
  m.y.resize(static_cast<int>(y.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < k; ++j) m.X(static_cast<int>(i), j) = rows[i][j];
  for (std::size_t i = 0; i < y.size(); ++i) m.y(static_cast<int>(i)) = y[i];
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.row_keys.push_back("r" + std::to_string(i));
  return m;
}

inline Player make_player(std::string id, std::string team, Role role,
                          double oi = 50.0, double minutes = 900.0,
                          int goals = 0) {
  Player p;
  p.player_id = std::move(id);
  p.team_id = std::move(team);
  p.name = "Name " + p.player_id;
  p.role = role;
  p.offensive_index = oi;
  p.minutes = minutes;
  p.goals = goals;
  return p;
}

inline ShotAction make_action(std::string id, std::string team,
                              std::string shooter,
                              std::vector<std::string> participants,
                              int outcome = 0,
                              Situation situation = Situation::OpenPlay) {
  ShotAction a;
  a.action_id = std::move(id);
  a.match_id = "m1";
  a.team_id = std::move(team);
  a.shooter_id = std::move(shooter);
  a.participants = std::move(participants);
  a.outcome = outcome;
  a.x = 85.0;
  a.y = 48.0;
  a.shot_angle = 25.0;
  a.first_pass_x = 60.0;
  a.first_pass_y = 40.0;
  a.pass_nb = static_cast<int>(a.participants.size()) - 1;
  if (a.pass_nb < 0) a.pass_nb = 0;
  a.players_nb = static_cast<int>(a.participants.size());
  a.avg_pass_distance = a.pass_nb > 0 ? 14.0 : 0.0;
  a.pl_performance_index = 55.0;
  a.h_a = Venue::Home;
  a.situation = situation;
  a.minute = 30.0;
  return a;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 eng{std::random_device{}()};
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("prs_test_" + tag + "_" +
                               std::to_string(eng() & 0xffffffffULL));
      std::error_code ec;
      if (std::filesystem::create_directories(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline const char* kPlayersHeader =
    "player_id,team_id,name,role,offensive_index,minutes,goals\n";
inline const char* kActionsHeader =
    "action_id,match_id,team_id,shooter_id,participants,outcome,x,y,"
    "shot_angle,first_pass_x,first_pass_y,pass_nb,players_nb,"
    "avg_pass_distance,pl_performance_index,h_a,situation,minute\n";

// One syntactically valid action row with substitutable fields.
inline std::string action_row(const std::string& id, const std::string& team,
                              const std::string& shooter,
                              const std::string& participants,
                              const std::string& players_nb,
                              const std::string& situation = "open_play",
                              const std::string& outcome = "0",
                              const std::string& x = "85") {
  return id + ",m1," + team + "," + shooter + "," + participants + "," +
         outcome + "," + x + ",48,25,60,40,1," + players_nb + ",14,55,h," +
         situation + ",30\n";
}

}  // namespace prs::testsupport

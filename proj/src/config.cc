#include "contactsim/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace contactsim {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
                         message),
      line_(line) {}

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
};

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

bool ParseBool(std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

Field Number(double RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = ParseDouble(v); }};
}

Field Optional(std::optional<double> RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = ParseDouble(v); }};
}

Field Flag(bool RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = ParseBool(v); }};
}

const std::map<std::string, Field, std::less<>>& Fields() {
  static const std::map<std::string, Field, std::less<>> fields = {
      {"dt", Number(&RunConfig::dt)},
      {"horizon", Number(&RunConfig::horizon)},
      {"gravity", Number(&RunConfig::gravity)},
      {"contact.threshold", Number(&RunConfig::contact_threshold)},
      {"arena.width", Number(&RunConfig::arena_width)},
      {"strict_paper", Flag(&RunConfig::strict_paper)},
      {"ball.mass", Number(&RunConfig::ball_mass)},
      {"ball.radius", Number(&RunConfig::ball_radius)},
      {"ball.mu", Number(&RunConfig::ball_mu)},
      {"ball.restitution", Number(&RunConfig::ball_restitution)},
      {"ball.x", Number(&RunConfig::ball_x)},
      {"ball.y", Number(&RunConfig::ball_y)},
      {"ball.vx", Number(&RunConfig::ball_vx)},
      {"ball.vy", Number(&RunConfig::ball_vy)},
      {"ball.omega", Number(&RunConfig::ball_omega)},
      {"biped.enabled", Flag(&RunConfig::biped_enabled)},
      {"biped.m_l", Number(&RunConfig::leg_mass)},
      {"biped.m_t", Number(&RunConfig::torso_mass)},
      {"biped.l", Number(&RunConfig::leg_length)},
      {"biped.c", Optional(&RunConfig::leg_centroid)},
      {"biped.I", Optional(&RunConfig::leg_inertia)},
      {"biped.kp", Number(&RunConfig::kp)},
      {"biped.kd", Number(&RunConfig::kd)},
      {"biped.theta1", Number(&RunConfig::theta1)},
      {"biped.theta2", Number(&RunConfig::theta2)},
      {"biped.dtheta1", Number(&RunConfig::dtheta1)},
      {"biped.dtheta2", Number(&RunConfig::dtheta2)},
      {"biped.stance_x", Number(&RunConfig::stance_x)},
      {"biped.angle_convention",
       {[](RunConfig& c, std::string_view v) {
         if (v == "relative") {
           c.convention = AngleConvention::kRelative;
         } else if (v == "absolute") {
           c.convention = AngleConvention::kAbsolute;
         } else {
           throw std::invalid_argument("expected relative or absolute, got '" +
                                       std::string(v) + "'");
         }
       }}},
      {"foot.width", Number(&RunConfig::foot_width)},
      {"foot.height", Number(&RunConfig::foot_height)},
      {"foot.mu", Number(&RunConfig::foot_mu)},
      {"foot.restitution", Number(&RunConfig::foot_restitution)},
      {"gait.step_angle", Number(&RunConfig::step_angle)},
      {"gait.frequency", Number(&RunConfig::gait_frequency)},
      {"kick.enabled", Flag(&RunConfig::kick_enabled)},
      {"kick.torque", Number(&RunConfig::kick_torque)},
      {"kick.trigger_distance", Number(&RunConfig::trigger_distance)},
      {"kick.duration", Number(&RunConfig::pulse_duration)},
      {"kick.windup_angle", Number(&RunConfig::windup_angle)},
      {"kick.windup_time", Number(&RunConfig::windup_time)},
      {"kick.mu", Number(&RunConfig::kick_mu)},
      {"kick.restitution", Number(&RunConfig::kick_restitution)},
      {"sweep.start", Number(&RunConfig::sweep_start)},
      {"sweep.end", Number(&RunConfig::sweep_end)},
      {"sweep.step", Number(&RunConfig::sweep_step)},
      {"output.dir",
       {[](RunConfig& c, std::string_view v) {
         if (v.empty()) throw std::invalid_argument("output.dir must not be empty");
         c.output_dir = std::string(v);
       }}},
  };
  return fields;
}

}  // namespace

void RunConfig::Validate(const std::string& source) const {
  auto fail = [&](const std::string& msg) { throw ConfigError(source, 0, msg); };
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(horizon > dt)) fail("horizon must exceed dt");
  if (!(gravity >= 0.0)) fail("gravity must be >= 0");
  if (!(contact_threshold >= 0.0)) fail("contact.threshold must be >= 0");
  if (!(arena_width > 0.0)) fail("arena.width must be > 0");
  if (!(ball_mass > 0.0) || !(ball_radius > 0.0)) fail("ball.mass and ball.radius must be > 0");
  if (!(ball_mu >= 0.0) || !(foot_mu >= 0.0) || !(kick_mu >= 0.0)) {
    fail("friction coefficients must be >= 0");
  }
  for (double e : {ball_restitution, foot_restitution, kick_restitution}) {
    if (!(e >= 0.0 && e <= 1.0)) fail("restitution coefficients must lie in [0, 1]");
  }
  if (!(leg_mass > 0.0) || !(torso_mass > 0.0) || !(leg_length > 0.0)) {
    fail("biped.m_l, biped.m_t and biped.l must be > 0");
  }
  if (leg_centroid && !(*leg_centroid > 0.0 && *leg_centroid < leg_length)) {
    fail("biped.c must lie in (0, biped.l)");
  }
  if (leg_inertia && !(*leg_inertia > 0.0)) fail("biped.I must be > 0");
  if (!(kp > 0.0) || !(kd > 0.0)) fail("biped.kp and biped.kd must be > 0");
  if (!(foot_width > 0.0) || !(foot_height > 0.0)) fail("foot.width and foot.height must be > 0");
  if (!(gait_frequency > 0.0)) fail("gait.frequency must be > 0");
  if (!(kick_torque >= 0.0)) fail("kick.torque must be >= 0");
  if (!(trigger_distance > 0.0)) fail("kick.trigger_distance must be > 0");
  if (!(pulse_duration > 0.0)) fail("kick.duration must be > 0");
  if (!(windup_time >= 0.0)) fail("kick.windup_time must be >= 0");
  if (kick_enabled && !biped_enabled) fail("kick.enabled needs biped.enabled");
  if (!(sweep_step > 0.0)) fail("sweep.step must be > 0");
  if (!(sweep_start <= sweep_end)) fail("sweep.start must not exceed sweep.end");
  if (!(sweep_start >= 0.0)) fail("sweep.start must be >= 0");
}

RunConfig ParseConfig(std::istream& in, const std::string& source) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source, line_no, "expected 'key = value'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    const auto it = Fields().find(key);
    if (it == Fields().end()) {
      throw ConfigError(source, line_no, "unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(source, line_no, "duplicate key '" + std::string(key) + "'");
    }
    if (value.empty()) {
      throw ConfigError(source, line_no, "missing value for '" + std::string(key) + "'");
    }
    try {
      it->second.set(config, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, std::string(key) + ": " + e.what());
    }
  }
  if (!seen.contains("dt")) throw ConfigError(source, 0, "missing required key 'dt'");
  config.Validate(source);
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  return ParseConfig(in, path.string());
}

Scenario BuildScenario(const RunConfig& config, std::optional<double> kick_torque) {
  Scenario s;
  s.dt = config.dt;
  s.horizon = config.horizon;
  s.gravity = config.gravity;
  s.contact_threshold = config.contact_threshold;
  s.arena_width = config.arena_width;
  s.position_update =
      config.strict_paper ? PositionUpdate::kExplicit : PositionUpdate::kSemiImplicit;

  FreeBody ball;
  ball.name = "ball";
  ball.shape = Circle{config.ball_radius};
  ball.props = InertialProps::Disc(config.ball_mass, config.ball_radius);
  ball.state.q << config.ball_x, config.ball_y, 0.0;
  ball.state.v << config.ball_vx, config.ball_vy, config.ball_omega;
  ball.ground_material = {config.ball_mu, config.ball_restitution};
  s.bodies.push_back(ball);

  if (config.biped_enabled) {
    BipedSetup b;
    b.model = BipedModel::WithDefaults(config.leg_mass, config.torso_mass, config.leg_length);
    if (config.leg_centroid) b.model.leg_centroid = *config.leg_centroid;
    if (config.leg_inertia) b.model.leg_inertia = *config.leg_inertia;
    b.model.foot = {0.5 * config.foot_width, 0.5 * config.foot_height};
    b.model.convention = config.convention;
    b.joints.theta << config.theta1, config.theta2;
    b.joints.theta_dot << config.dtheta1, config.dtheta2;
    b.gains = {config.kp, config.kd};
    b.gait = {config.step_angle, config.gait_frequency};
    b.stance_x = config.stance_x;
    b.foot_ground = {config.foot_mu, config.foot_restitution};
    s.biped = b;
  }
  if (config.kick_enabled) {
    KickSetup k;
    k.torque = kick_torque.value_or(config.kick_torque);
    k.trigger_distance = config.trigger_distance;
    k.pulse_duration = config.pulse_duration;
    k.windup_angle = config.windup_angle;
    k.windup_time = config.windup_time;
    k.target_body = 0;
    k.foot_ball = {config.kick_mu, config.kick_restitution};
    s.kick = k;
  }
  return s;
}

}  // namespace contactsim

#include <algorithm>
#include <set>
#include <sstream>

#include "reprokit/ripper.hpp"

namespace reprokit {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Everything after the first `skip` whitespace-separated tokens.
std::string rest_after(const std::string& line, int skip) {
  std::size_t pos = 0;
  for (int i = 0; i < skip; ++i) {
    pos = line.find_first_not_of(" \t", pos);
    pos = line.find_first_of(" \t", pos);
    if (pos == std::string::npos) return {};
  }
  pos = line.find_first_not_of(" \t", pos);
  if (pos == std::string::npos) return {};
  auto end = line.find_last_not_of(" \t\r");
  return line.substr(pos, end - pos + 1);
}

}  // namespace

const BehaviorState* BehaviorModel::find(const std::string& id) const {
  for (const auto& s : states) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

BehaviorModel parse_behavior_model(std::string_view text, const std::string& origin) {
  BehaviorModel model;
  std::istringstream in{std::string(text)};
  std::string line;
  long lineno = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = tokenize(line);
    if (toks.empty() || toks[0].starts_with("#")) continue;

    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "behavior-model") {
        throw ParseError(origin, lineno, "expected header 'behavior-model 1'");
      }
      if (toks[1] != "1") {
        throw ParseError(origin, lineno, "unsupported behavior-model version " + toks[1]);
      }
      saw_header = true;
      continue;
    }

    const auto& verb = toks[0];
    if (verb == "initial") {
      if (toks.size() != 2) throw ParseError(origin, lineno, "usage: initial <state>");
      if (!model.initial.empty()) throw ParseError(origin, lineno, "initial declared twice");
      model.initial = toks[1];
    } else if (verb == "state") {
      if (toks.size() < 2) throw ParseError(origin, lineno, "usage: state <id> key=value...");
      BehaviorState st;
      st.id = toks[1];
      for (std::size_t i = 2; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos) {
          throw ParseError(origin, lineno, "expected key=value, got '" + toks[i] + "'");
        }
        const auto key = toks[i].substr(0, eq);
        const auto value = toks[i].substr(eq + 1);
        if (key == "activity") {
          st.activity = value;
        } else if (key == "window") {
          st.window = value;
        } else if (key == "layout") {
          const auto slash = value.find('/');
          if (slash == std::string::npos) {
            throw ParseError(origin, lineno, "layout must be <activity>/<window>");
          }
          st.layout_activity = value.substr(0, slash);
          st.layout_window = value.substr(slash + 1);
        } else if (key == "hide") {
          st.hidden = split_list(value);
        } else {
          throw ParseError(origin, lineno, "unknown state attribute '" + key + "'");
        }
      }
      if (st.activity.empty() || st.window.empty()) {
        throw ParseError(origin, lineno, "state needs activity= and window=");
      }
      if (st.layout_activity.empty()) {
        st.layout_activity = st.activity;
        st.layout_window = st.window;
      }
      if (model.find(st.id)) {
        throw Error(ErrorKind::model_malformed,
                    origin + ":" + std::to_string(lineno) + ": state '" + st.id +
                        "' declared twice");
      }
      model.states.push_back(std::move(st));
    } else if (verb == "text") {
      if (toks.size() < 3) throw ParseError(origin, lineno, "usage: text <state> <id> <text>");
      auto it = std::find_if(model.states.begin(), model.states.end(),
                             [&](const BehaviorState& s) { return s.id == toks[1]; });
      if (it == model.states.end()) {
        throw Error(ErrorKind::model_malformed,
                    origin + ":" + std::to_string(lineno) +
                        ": text override for undeclared state '" + toks[1] + "'");
      }
      it->text_overrides[toks[2]] = rest_after(line, 3);
    } else if (verb == "on") {
      if (toks.size() != 6 || toks[4] != "->") {
        throw ParseError(origin, lineno,
                         "usage: on <state> <id> <action> -> <target>");
      }
      auto kind = parse_action_kind(toks[3]);
      if (!kind) throw ParseError(origin, lineno, "unknown action '" + toks[3] + "'");
      BehaviorKey key{toks[1], toks[2], *kind};
      if (!model.table.emplace(key, toks[5]).second) {
        throw Error(ErrorKind::model_malformed,
                    origin + ":" + std::to_string(lineno) + ": duplicate transition for " +
                        toks[1] + " " + toks[2] + " " + toks[3]);
      }
    } else {
      throw ParseError(origin, lineno, "unknown directive '" + verb + "'");
    }
  }

  if (!saw_header) throw ParseError(origin, lineno, "missing 'behavior-model 1' header");
  if (model.initial.empty() || !model.find(model.initial)) {
    throw Error(ErrorKind::model_malformed, origin + ": initial state missing or undeclared");
  }
  for (const auto& [key, target] : model.table) {
    if (!model.find(key.state)) {
      throw Error(ErrorKind::model_malformed,
                  origin + ": transition from undeclared state '" + key.state + "'");
    }
    if (target != kExternalTarget && target != kExitTarget && !model.find(target)) {
      throw Error(ErrorKind::model_malformed,
                  origin + ": transition to undeclared state '" + target + "'");
    }
  }
  return model;
}

std::string serialize_behavior_model(const BehaviorModel& model) {
  std::ostringstream out;
  out << "behavior-model 1\n";
  out << "initial " << model.initial << "\n";
  for (const auto& s : model.states) {
    out << "state " << s.id << " activity=" << s.activity << " window=" << s.window;
    if (s.layout_activity != s.activity || s.layout_window != s.window) {
      out << " layout=" << s.layout_activity << "/" << s.layout_window;
    }
    if (!s.hidden.empty()) {
      out << " hide=";
      for (std::size_t i = 0; i < s.hidden.size(); ++i) {
        out << (i ? "," : "") << s.hidden[i];
      }
    }
    out << "\n";
    for (const auto& [id, text] : s.text_overrides) {
      out << "text " << s.id << " " << id << " " << text << "\n";
    }
  }
  for (const auto& [key, target] : model.table) {
    out << "on " << key.state << " " << key.resource_id << " " << to_string(key.action)
        << " -> " << target << "\n";
  }
  return out.str();
}

}  // namespace reprokit

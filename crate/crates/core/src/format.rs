//! JSON game files, strategy profile files and DOT export.
//!
//! Game file layout:
//!
//! ```json
//! { "directed": true, "nodes": ["s", "v", "t"],
//!   "edges": [{"id": "a", "from": "s", "to": "t", "cost": "1", "capacity": 1}],
//!   "agents": {"symmetric": {"n": 2}},
//!   "source": "s", "sink": "t" }
//! ```
//!
//! `agents` may instead be `{"list": [{"source": "s", "sink": "t1"}]}`.
//! Costs are JSON integers or `"p/q"` strings; decimals are rejected.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::game::{Agents, Game, Path, StrategyProfile};
use crate::network::NetworkBuilder;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: String,
    pub from: String,
    pub to: String,
    pub cost: Cost,
    pub capacity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub source: String,
    pub sink: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetricFile {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AgentsFile {
    Symmetric(SymmetricFile),
    List(Vec<AgentFile>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub directed: bool,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeFile>,
    pub agents: AgentsFile,
    pub source: String,
    pub sink: String,
}

impl GameFile {
    pub fn from_game(game: &Game) -> GameFile {
        let network = game.network();
        let agents = match game.agents() {
            Agents::Symmetric { n } => AgentsFile::Symmetric(SymmetricFile { n: *n }),
            Agents::Asymmetric { terminals } => AgentsFile::List(
                terminals
                    .iter()
                    .map(|&(s, t)| AgentFile {
                        source: network.node_name(s).into(),
                        sink: network.node_name(t).into(),
                    })
                    .collect(),
            ),
        };
        GameFile {
            directed: network.is_directed(),
            nodes: network.nodes().to_vec(),
            edges: network
                .edges()
                .iter()
                .map(|e| EdgeFile {
                    id: e.id.clone(),
                    from: network.node_name(e.from).into(),
                    to: network.node_name(e.to).into(),
                    cost: e.cost,
                    capacity: e.capacity,
                })
                .collect(),
            agents,
            source: network.node_name(network.source()).into(),
            sink: network.node_name(network.sink()).into(),
        }
    }

    pub fn to_game(&self) -> Result<Game> {
        let declared: HashSet<&str> = self.nodes.iter().map(String::as_str).collect();
        if declared.len() != self.nodes.len() {
            return Err(Error::Input("duplicate node name".into()));
        }
        let mut b = NetworkBuilder::new(self.directed);
        for v in &self.nodes {
            b = b.node(v);
        }
        for e in &self.edges {
            for end in [&e.from, &e.to] {
                if !declared.contains(end.as_str()) {
                    return Err(Error::Input(format!(
                        "edge {:?} uses undeclared node {end:?}",
                        e.id
                    )));
                }
            }
            b.push_edge(&e.id, &e.from, &e.to, e.cost, e.capacity);
        }
        let network = b.build(&self.source, &self.sink)?;
        match &self.agents {
            AgentsFile::Symmetric(s) => Game::symmetric(network, s.n),
            AgentsFile::List(list) => {
                let pairs: Vec<(&str, &str)> = list
                    .iter()
                    .map(|a| (a.source.as_str(), a.sink.as_str()))
                    .collect();
                Game::asymmetric(network, &pairs)
            }
        }
    }
}

pub fn game_from_json(text: &str) -> Result<Game> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid game JSON: {e}")))?;
    file.to_game()
}

pub fn game_to_json(game: &Game) -> String {
    serde_json::to_string_pretty(&GameFile::from_game(game)).expect("serializable")
}

/// Profile file: one edge-id list per agent, e.g. `[["a"], ["b", "c"]]`.
/// A `{"profile": [...]}` wrapper is accepted too.
pub fn profile_from_json(game: &Game, text: &str) -> Result<StrategyProfile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid profile JSON: {e}")))?;
    let inner = match &value {
        serde_json::Value::Object(m) => m
            .get("profile")
            .ok_or_else(|| Error::Input("profile object needs a \"profile\" field".into()))?,
        other => other,
    };
    let ids: Vec<Vec<String>> = serde_json::from_value(inner.clone())
        .map_err(|e| Error::Input(format!("profile must be a list of edge-id lists: {e}")))?;
    if ids.len() != game.n() {
        return Err(Error::Input(format!(
            "profile has {} paths for {} agents",
            ids.len(),
            game.n()
        )));
    }
    let paths = ids
        .iter()
        .enumerate()
        .map(|(i, p)| Path::from_ids(game.network(), game.terminals(i).0, p))
        .collect::<Result<Vec<_>>>()?;
    let profile = StrategyProfile::new(paths);
    game.validate_profile(&profile)?;
    Ok(profile)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering with `"p/q | c"` edge labels.
pub fn to_dot(game: &Game) -> String {
    let network = game.network();
    let (kind, arrow) = if network.is_directed() {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let mut out = String::new();
    writeln!(out, "{kind} G {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (v, name) in network.nodes().iter().enumerate() {
        let shape = if v == network.source() || v == network.sink() {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {} [shape={shape}];", dot_id(name)).unwrap();
    }
    for e in network.edges() {
        writeln!(
            out,
            "  {} {arrow} {} [id={}, label={}];",
            dot_id(network.node_name(e.from)),
            dot_id(network.node_name(e.to)),
            dot_id(&e.id),
            dot_id(&format!("{} | {}", e.cost, e.capacity)),
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_fig1, build_fig8_asymmetric};

    #[test]
    fn round_trip_symmetric_and_asymmetric() {
        for game in [build_fig1(), build_fig8_asymmetric(Cost::integer(5)).unwrap()] {
            let text = game_to_json(&game);
            assert_eq!(game_from_json(&text).unwrap(), game);
        }
    }

    #[test]
    fn decimals_are_rejected() {
        let text = r#"{"directed":true,"nodes":["s","t"],
            "edges":[{"id":"a","from":"s","to":"t","cost":0.5,"capacity":1}],
            "agents":{"symmetric":{"n":1}},"source":"s","sink":"t"}"#;
        let err = game_from_json(text).unwrap_err();
        assert!(err.to_string().contains("decimal"), "{err}");
        let text = text.replace("0.5", "\"1/2\"");
        assert!(game_from_json(&text).is_ok());
    }

    #[test]
    fn unknown_fields_and_nodes_are_rejected() {
        let text = r#"{"directed":true,"nodes":["s","t"],
            "edges":[{"id":"a","from":"s","to":"x","cost":1,"capacity":1}],
            "agents":{"symmetric":{"n":1}},"source":"s","sink":"t"}"#;
        assert!(matches!(game_from_json(text), Err(Error::Input(_))));
        let text = text.replace("\"x\"", "\"t\"").replace("\"directed\"", "\"colour\":1,\"directed\"");
        assert!(matches!(game_from_json(&text), Err(Error::Input(_))));
    }

    #[test]
    fn dot_labels() {
        let dot = to_dot(&build_fig1());
        assert!(dot.starts_with("digraph G {"));
        assert!(dot.contains("\"s\" -> \"v\" [id=\"b\", label=\"6/5 | 2\"];"), "{dot}");
    }

    #[test]
    fn profile_parsing() {
        let game = build_fig1();
        let p = profile_from_json(&game, r#"[["a"],["b","c"]]"#).unwrap();
        assert_eq!(p.to_ids(game.network())[1], vec!["b", "c"]);
        assert!(profile_from_json(&game, r#"{"profile":[["a"],["b","c"]]}"#).is_ok());
        assert!(profile_from_json(&game, r#"[["a"]]"#).is_err());
        assert!(profile_from_json(&game, r#"[["a"],["c"]]"#).is_err());
    }
}

//! JSON instance schema.
//!
//! A plain instance is `{"offline": [{"id", "weight"}], "online": [{"id",
//! "constraint", "edges": [{"u", "p", "w"}]}]}`; a known-i.d. input wraps a
//! type graph as `{"type_graph": ..., "distributions": [[{"type", "prob"},
//! ...], ...]}`. Probabilities round-trip through the shortest f64
//! representation, so emitted files are byte-stable.

use crate::model::{
    KnownIdInput, ModelError, OfflineVertex, ProbingConstraint, SetFamily, StochasticGraph,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown offline vertex id {0:?}")]
    UnknownOffline(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateId(String),
    #[error("unknown type id {0:?} in distribution row {1}")]
    UnknownTypeId(String, usize),
    #[error("knapsack cost references unknown edge {0:?}")]
    UnknownCostEdge(String),
    #[error("family set references unknown edge {0:?}")]
    UnknownFamilyEdge(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub offline: Vec<OfflineJson>,
    pub online: Vec<OnlineJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OfflineJson {
    pub id: String,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnlineJson {
    pub id: String,
    pub constraint: ConstraintJson,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConstraintJson {
    Patience { l: usize },
    Knapsack { budget: f64, costs: BTreeMap<String, f64> },
    Family { sets: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub p: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdInputJson {
    pub type_graph: InstanceJson,
    pub distributions: Vec<Vec<TypeProbJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypeProbJson {
    #[serde(rename = "type")]
    pub ty: String,
    pub prob: f64,
}

/// Either kind of instance file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyInstance {
    Id(IdInputJson),
    Graph(InstanceJson),
}

pub fn graph_to_json(g: &StochasticGraph) -> InstanceJson {
    let offline = g
        .offline
        .iter()
        .map(|o| OfflineJson { id: o.name.clone(), weight: o.weight })
        .collect();
    let online = g
        .online
        .iter()
        .map(|v| {
            let edges: Vec<EdgeJson> = v
                .incident
                .iter()
                .map(|&e| EdgeJson {
                    u: g.offline[g.edges[e].u].name.clone(),
                    p: g.edges[e].p,
                    w: g.edges[e].w,
                })
                .collect();
            let constraint = match &v.constraint {
                ProbingConstraint::Patience(l) => ConstraintJson::Patience { l: *l },
                ProbingConstraint::Knapsack { budget, costs } => ConstraintJson::Knapsack {
                    budget: *budget,
                    costs: costs
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| (edges[i].u.clone(), c))
                        .collect(),
                },
                ProbingConstraint::Family(f) => {
                    // emit the maximal sets only
                    let members: Vec<u64> = f.members().collect();
                    let maximal: Vec<u64> = members
                        .iter()
                        .copied()
                        .filter(|&m| !members.iter().any(|&o| o != m && o & m == m))
                        .collect();
                    ConstraintJson::Family {
                        sets: maximal
                            .iter()
                            .map(|&m| {
                                (0..f.width())
                                    .filter(|i| m & (1 << i) != 0)
                                    .map(|i| edges[i].u.clone())
                                    .collect()
                            })
                            .collect(),
                    }
                }
            };
            OnlineJson { id: v.name.clone(), constraint, edges }
        })
        .collect();
    InstanceJson { offline, online }
}

pub fn graph_from_json(j: &InstanceJson) -> Result<StochasticGraph, SchemaError> {
    let mut offline_ids = BTreeMap::new();
    for (i, o) in j.offline.iter().enumerate() {
        if offline_ids.insert(o.id.clone(), i).is_some() {
            return Err(SchemaError::DuplicateId(o.id.clone()));
        }
    }
    let offline: Vec<OfflineVertex> = j
        .offline
        .iter()
        .map(|o| OfflineVertex { name: o.id.clone(), weight: o.weight })
        .collect();
    let mut online = Vec::new();
    let mut edge_list = Vec::new();
    for (v, oj) in j.online.iter().enumerate() {
        // incident list order defines knapsack/family positions
        let mut incident_us = Vec::new();
        for ej in &oj.edges {
            let &u = offline_ids
                .get(&ej.u)
                .ok_or_else(|| SchemaError::UnknownOffline(ej.u.clone()))?;
            edge_list.push((u, v, ej.p, ej.w));
            incident_us.push(ej.u.clone());
        }
        let pos_of = |id: &String| incident_us.iter().position(|x| x == id);
        let constraint = match &oj.constraint {
            ConstraintJson::Patience { l } => ProbingConstraint::Patience(*l),
            ConstraintJson::Knapsack { budget, costs } => {
                let mut cost_vec = vec![0.0; incident_us.len()];
                for (id, &c) in costs {
                    let pos =
                        pos_of(id).ok_or_else(|| SchemaError::UnknownCostEdge(id.clone()))?;
                    cost_vec[pos] = c;
                }
                ProbingConstraint::Knapsack { budget: *budget, costs: cost_vec }
            }
            ConstraintJson::Family { sets } => {
                let mut idx_sets = Vec::new();
                for set in sets {
                    let mut positions = Vec::new();
                    for id in set {
                        positions.push(
                            pos_of(id)
                                .ok_or_else(|| SchemaError::UnknownFamilyEdge(id.clone()))?,
                        );
                    }
                    idx_sets.push(positions);
                }
                ProbingConstraint::Family(SetFamily::closure(incident_us.len(), &idx_sets)?)
            }
        };
        online.push((oj.id.clone(), constraint));
    }
    Ok(StochasticGraph::new(offline, online, edge_list)?)
}

pub fn id_input_to_json(input: &KnownIdInput) -> IdInputJson {
    let type_graph = graph_to_json(&input.type_graph);
    let distributions = (0..input.n_arrivals())
        .map(|i| {
            input
                .row(i)
                .iter()
                .map(|&(b, r)| TypeProbJson {
                    ty: input.type_graph.online[b].name.clone(),
                    prob: r,
                })
                .collect()
        })
        .collect();
    IdInputJson { type_graph, distributions }
}

pub fn id_input_from_json(j: &IdInputJson) -> Result<KnownIdInput, SchemaError> {
    let tg = graph_from_json(&j.type_graph)?;
    let mut rows = Vec::new();
    for (i, row) in j.distributions.iter().enumerate() {
        let mut out = Vec::new();
        for tp in row {
            let b = tg
                .online
                .iter()
                .position(|v| v.name == tp.ty)
                .ok_or_else(|| SchemaError::UnknownTypeId(tp.ty.clone(), i))?;
            out.push((b, tp.prob));
        }
        rows.push(out);
    }
    Ok(KnownIdInput::new(tg, rows)?)
}

/// Parse either instance kind from a JSON string.
pub fn parse_any(text: &str) -> Result<AnyInstance, SchemaError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::model::ProbingConstraint;
    use rand::Rng as _;

    #[test]
    fn graph_roundtrip() {
        let mut rng = crate::rng::root(71);
        for _ in 0..20 {
            let knapsack = rng.gen_bool(0.5);
            let g = generate::random_weighted(&mut rng, 3, 3, knapsack);
            let j = graph_to_json(&g);
            let text = serde_json::to_string_pretty(&j).unwrap();
            let back = graph_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(g.edges.len(), back.edges.len());
            for (a, b) in g.edges.iter().zip(back.edges.iter()) {
                assert_eq!(a.p, b.p);
                assert_eq!(a.w, b.w);
                assert_eq!(a.u, b.u);
            }
        }
    }

    #[test]
    fn family_roundtrip_preserves_membership() {
        let g = generate::random_family_star(&mut crate::rng::root(73), 5);
        let back = graph_from_json(&graph_to_json(&g)).unwrap();
        let deg = g.online[0].incident.len();
        for mask in 0u64..(1 << deg) {
            let positions: Vec<usize> = (0..deg).filter(|i| mask & (1 << i) != 0).collect();
            assert_eq!(
                g.feasible_positions(0, &positions),
                back.feasible_positions(0, &positions),
                "mask {mask:b}"
            );
        }
    }

    #[test]
    fn id_roundtrip() {
        let input = generate::random_id_input(&mut crate::rng::root(79), 3, 2, 3, false);
        let j = id_input_to_json(&input);
        let text = serde_json::to_string(&j).unwrap();
        let back = match parse_any(&text).unwrap() {
            AnyInstance::Id(j) => id_input_from_json(&j).unwrap(),
            AnyInstance::Graph(_) => panic!("sniffed the wrong kind"),
        };
        assert_eq!(back.n_arrivals(), input.n_arrivals());
        for i in 0..input.n_arrivals() {
            assert_eq!(back.row(i), input.row(i));
        }
    }

    #[test]
    fn plain_graph_sniffed_as_graph() {
        let g = generate::star_graph(&[(0.5, 1.0)], ProbingConstraint::Patience(1));
        let text = serde_json::to_string(&graph_to_json(&g)).unwrap();
        assert!(matches!(parse_any(&text).unwrap(), AnyInstance::Graph(_)));
    }

    #[test]
    fn third_is_serialized_with_full_precision() {
        let g = generate::star_graph(&[(1.0 / 3.0, 1.0)], ProbingConstraint::Patience(1));
        let text = serde_json::to_string(&graph_to_json(&g)).unwrap();
        assert!(text.contains("0.3333333333333333"), "{text}");
        let back = graph_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.edges[0].p, 1.0 / 3.0);
    }
}

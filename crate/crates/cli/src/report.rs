//! Line-oriented `key: value` reports with an equivalent JSON rendering.

use capleaf_core::solver::StepRecord;
use capleaf_core::Edge;
use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Text(String),
    Flag(bool),
    Ints(Vec<usize>),
    Edges(Vec<Edge>),
    Steps(Vec<StepRecord>),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Flag(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

fn edges_text(edges: &[Edge]) -> String {
    if edges.is_empty() {
        return "none".into();
    }
    edges
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn edges_json(edges: &[Edge]) -> Json {
    Json::Array(edges.iter().map(|&(a, b)| json!([a, b])).collect())
}

/// Ordered report. Keys are unique; insertion order is the output order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    fields: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &'static str, value: impl Into<Value>) {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            match value {
                Value::Int(i) => out.push_str(&format!("{key}: {i}\n")),
                Value::Text(s) => out.push_str(&format!("{key}: {s}\n")),
                Value::Flag(b) => {
                    out.push_str(&format!("{key}: {}\n", if *b { "yes" } else { "no" }))
                }
                Value::Ints(v) => {
                    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    let s = if s.is_empty() {
                        "none".to_string()
                    } else {
                        s.join(" ")
                    };
                    out.push_str(&format!("{key}: {s}\n"));
                }
                Value::Edges(e) => out.push_str(&format!("{key}: {}\n", edges_text(e))),
                Value::Steps(steps) => {
                    out.push_str(&format!("{key}: {}\n", steps.len()));
                    for (i, r) in steps.iter().enumerate() {
                        out.push_str(&format!(
                            "step: {} {} +[{}] -[{}] size={} leaves={}\n",
                            i + 1,
                            r.kind,
                            edges_text(&r.edges_added),
                            edges_text(&r.edges_removed),
                            r.tree_size,
                            r.leaf_count
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (key, value) in &self.fields {
            let v = match value {
                Value::Int(i) => json!(i),
                Value::Text(s) => json!(s),
                Value::Flag(b) => json!(b),
                Value::Ints(v) => json!(v),
                Value::Edges(e) => edges_json(e),
                Value::Steps(steps) => Json::Array(
                    steps
                        .iter()
                        .map(|r| {
                            json!({
                                "kind": r.kind.as_str(),
                                "added": edges_json(&r.edges_added),
                                "removed": edges_json(&r.edges_removed),
                                "size": r.tree_size,
                                "leaves": r.leaf_count,
                            })
                        })
                        .collect(),
                ),
            };
            map.insert((*key).to_string(), v);
        }
        Json::Object(map)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s =
                serde_json::to_string_pretty(&self.to_json()).expect("plain values serialize");
            s.push('\n');
            s
        } else {
            self.to_text()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_keep_order() {
        let mut r = Report::new("check");
        r.set("n", 5usize);
        r.set("ok", true);
        r.set("tree_edges", Value::Edges(vec![(0, 1), (1, 2)]));
        r.set("cut", Value::Ints(vec![]));
        r.set("n", 6usize);
        assert_eq!(
            r.to_text(),
            "command: check\nn: 6\nok: yes\ntree_edges: 0-1 1-2\ncut: none\n"
        );
        let json = r.to_json();
        let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "n", "ok", "tree_edges", "cut"]);
        assert_eq!(r.to_json()["tree_edges"], json!([[0, 1], [1, 2]]));
    }
}

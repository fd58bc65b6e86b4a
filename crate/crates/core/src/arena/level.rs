use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type DoorId = u32;

/// Carrying capacity for tokens or keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Capacity {
    /// Non-cumulative: at most one item carried at a time.
    One,
    /// Cumulative: any number may be carried.
    #[default]
    Unbounded,
}

impl Capacity {
    pub fn limit(self) -> u32 {
        match self {
            Capacity::One => 1,
            Capacity::Unbounded => u32::MAX,
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Capacity::One => "1",
            Capacity::Unbounded => "inf",
        })
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "1" => Ok(Capacity::One),
            "inf" => Ok(Capacity::Unbounded),
            other => Err(serde::de::Error::custom(format!(
                "capacity must be \"1\" or \"inf\", got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoorOp {
    Open,
    Close,
}

/// Sets a door to a fixed state. Applying it twice is the same as once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoorAction {
    pub door: DoorId,
    pub action: DoorOp,
}

impl DoorAction {
    pub fn open(door: DoorId) -> Self {
        DoorAction { door, action: DoorOp::Open }
    }

    pub fn close(door: DoorId) -> Self {
        DoorAction { door, action: DoorOp::Close }
    }
}

impl fmt::Display for DoorAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.action {
            DoorOp::Open => write!(f, "+{}", self.door),
            DoorOp::Close => write!(f, "-{}", self.door),
        }
    }
}

/// A k-button: an optional actuator applying all of its actions when pressed.
pub type Button = Vec<DoorAction>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VertexSpec {
    pub id: VertexId,
    pub must_visit: bool,
    pub exit: bool,
    pub tokens: u32,
    pub keys: u32,
    /// Pressure plates, fired in order on every arrival.
    pub plates: Vec<DoorAction>,
    pub buttons: Vec<Button>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    /// Traversable from `from` to `to` only.
    pub one_way: bool,
    /// Vanishes after one traversal.
    pub single_use: bool,
    /// Tokens spent per traversal (0 or 1).
    pub toll: u32,
    pub door: Option<DoorId>,
}

impl EdgeSpec {
    /// The endpoint opposite to `at`, if `at` is an endpoint.
    pub fn other_end(&self, at: VertexId) -> Option<VertexId> {
        if at == self.from {
            Some(self.to)
        } else if at == self.to {
            Some(self.from)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DoorSpec {
    pub id: DoorId,
    pub initially_open: bool,
}

/// A feature-annotated graph game.
///
/// Ids are dense: vertex, edge and door ids equal their positions in the
/// respective lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Level {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    pub doors: Vec<DoorSpec>,
    pub start: VertexId,
    pub require_exit: bool,
    pub token_capacity: Capacity,
    pub key_capacity: Capacity,
    pub initial_tokens: u32,
    pub initial_keys: u32,
    /// Edge whose traversals are counted by solution statistics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_edge: Option<EdgeId>,
}

impl Default for Level {
    fn default() -> Self {
        Level::with_vertices(0)
    }
}

impl Level {
    /// A level with `n` featureless vertices, no edges and start 0.
    pub fn with_vertices(n: usize) -> Self {
        Level {
            vertices: (0..n as u32)
                .map(|id| VertexSpec { id, ..Default::default() })
                .collect(),
            edges: Vec::new(),
            doors: Vec::new(),
            start: 0,
            require_exit: false,
            token_capacity: Capacity::Unbounded,
            key_capacity: Capacity::Unbounded,
            initial_tokens: 0,
            initial_keys: 0,
            marked_edge: None,
        }
    }

    pub fn exit_vertex(&self) -> Option<VertexId> {
        self.vertices.iter().find(|v| v.exit).map(|v| v.id)
    }

    pub fn must_visit(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().filter(|v| v.must_visit).map(|v| v.id)
    }

    pub fn total_placed_tokens(&self) -> u64 {
        self.vertices.iter().map(|v| u64::from(v.tokens)).sum()
    }

    pub fn total_placed_keys(&self) -> u64 {
        self.vertices.iter().map(|v| u64::from(v.keys)).sum()
    }

    /// Every door action emitted by any plate or button.
    pub fn actions(&self) -> impl Iterator<Item = &DoorAction> + '_ {
        self.vertices
            .iter()
            .flat_map(|v| v.plates.iter().chain(v.buttons.iter().flatten()))
    }

    /// Incident edge ids per vertex, sorted by edge id.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            if let Some(list) = inc.get_mut(e.from as usize) {
                list.push(e.id);
            }
            if e.to != e.from {
                if let Some(list) = inc.get_mut(e.to as usize) {
                    list.push(e.id);
                }
            }
        }
        inc
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("level serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// All invariant violations; empty iff the level is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        validate_level(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `vertices[index].id`, `edges[index].id` or `doors[index].id` differs from `index`.
    IdMismatch { list: &'static str, index: usize, id: u32 },
    StartOutOfRange { start: VertexId },
    EdgeEndpointOutOfRange { edge: EdgeId, vertex: VertexId },
    TollOutOfRange { edge: EdgeId, toll: u32 },
    UnknownDoor { referrer: String, door: DoorId },
    DoorSharedByEdges { door: DoorId, edges: Vec<EdgeId> },
    MultipleExits { exits: Vec<VertexId> },
    MissingExit,
    InitialExceedsCapacity { item: &'static str, count: u32 },
    MarkedEdgeOutOfRange { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdMismatch { list, index, id } => {
                write!(f, "{list}[{index}].id: ids must be dense, found {id}")
            }
            Violation::StartOutOfRange { start } => write!(f, "start: vertex {start} does not exist"),
            Violation::EdgeEndpointOutOfRange { edge, vertex } => {
                write!(f, "edges[{edge}]: endpoint {vertex} does not exist")
            }
            Violation::TollOutOfRange { edge, toll } => {
                write!(f, "edges[{edge}].toll: must be 0 or 1, found {toll}")
            }
            Violation::UnknownDoor { referrer, door } => {
                write!(f, "{referrer}: door {door} does not exist")
            }
            Violation::DoorSharedByEdges { door, edges } => {
                write!(f, "doors[{door}]: carried by more than one edge {edges:?}")
            }
            Violation::MultipleExits { exits } => write!(f, "vertices: more than one exit {exits:?}"),
            Violation::MissingExit => write!(f, "requireExit: no exit vertex"),
            Violation::InitialExceedsCapacity { item, count } => {
                write!(f, "initial{item}: {count} exceeds carrying capacity")
            }
            Violation::MarkedEdgeOutOfRange { edge } => {
                write!(f, "markedEdge: edge {edge} does not exist")
            }
        }
    }
}

fn validate_level(level: &Level) -> Vec<Violation> {
    let mut out = Vec::new();
    let nv = level.vertices.len() as u32;
    let nd = level.doors.len() as u32;

    for (index, v) in level.vertices.iter().enumerate() {
        if v.id as usize != index {
            out.push(Violation::IdMismatch { list: "vertices", index, id: v.id });
        }
    }
    for (index, e) in level.edges.iter().enumerate() {
        if e.id as usize != index {
            out.push(Violation::IdMismatch { list: "edges", index, id: e.id });
        }
    }
    for (index, d) in level.doors.iter().enumerate() {
        if d.id as usize != index {
            out.push(Violation::IdMismatch { list: "doors", index, id: d.id });
        }
    }
    if level.start >= nv {
        out.push(Violation::StartOutOfRange { start: level.start });
    }

    let mut carriers: Vec<Vec<EdgeId>> = vec![Vec::new(); nd as usize];
    for (index, e) in level.edges.iter().enumerate() {
        let id = index as EdgeId;
        for endpoint in [e.from, e.to] {
            if endpoint >= nv {
                out.push(Violation::EdgeEndpointOutOfRange { edge: id, vertex: endpoint });
            }
        }
        if e.toll > 1 {
            out.push(Violation::TollOutOfRange { edge: id, toll: e.toll });
        }
        if let Some(door) = e.door {
            match carriers.get_mut(door as usize) {
                Some(list) => list.push(id),
                None => out.push(Violation::UnknownDoor { referrer: format!("edges[{id}].door"), door }),
            }
        }
    }
    for (door, list) in carriers.into_iter().enumerate() {
        if list.len() > 1 {
            out.push(Violation::DoorSharedByEdges { door: door as DoorId, edges: list });
        }
    }

    for (index, v) in level.vertices.iter().enumerate() {
        for (p, a) in v.plates.iter().enumerate() {
            if a.door >= nd {
                out.push(Violation::UnknownDoor {
                    referrer: format!("vertices[{index}].plates[{p}]"),
                    door: a.door,
                });
            }
        }
        for (b, button) in v.buttons.iter().enumerate() {
            for a in button {
                if a.door >= nd {
                    out.push(Violation::UnknownDoor {
                        referrer: format!("vertices[{index}].buttons[{b}]"),
                        door: a.door,
                    });
                }
            }
        }
    }

    let exits: Vec<VertexId> = level.vertices.iter().filter(|v| v.exit).map(|v| v.id).collect();
    if exits.len() > 1 {
        out.push(Violation::MultipleExits { exits });
    } else if level.require_exit && exits.is_empty() {
        out.push(Violation::MissingExit);
    }

    if level.initial_tokens > level.token_capacity.limit() {
        out.push(Violation::InitialExceedsCapacity { item: "Tokens", count: level.initial_tokens });
    }
    if level.initial_keys > level.key_capacity.limit() {
        out.push(Violation::InitialExceedsCapacity { item: "Keys", count: level.initial_keys });
    }
    if let Some(edge) = level.marked_edge {
        if edge as usize >= level.edges.len() {
            out.push(Violation::MarkedEdgeOutOfRange { edge });
        }
    }
    out
}

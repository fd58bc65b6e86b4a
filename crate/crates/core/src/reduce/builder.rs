use crate::arena::{Button, DoorAction, DoorId, DoorSpec, EdgeId, EdgeSpec, Level, VertexId, VertexSpec};

/// Edge attributes; the default is a plain two-way corridor.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct EdgeOpts {
    pub one_way: bool,
    pub single_use: bool,
    pub toll: u32,
    pub door: Option<DoorId>,
}

impl EdgeOpts {
    pub fn plain() -> Self {
        EdgeOpts::default()
    }

    pub fn door(door: DoorId) -> Self {
        EdgeOpts { door: Some(door), ..Default::default() }
    }

    pub fn one_way(mut self) -> Self {
        self.one_way = true;
        self
    }

    pub fn single_use(mut self) -> Self {
        self.single_use = true;
        self
    }

    pub fn toll(mut self) -> Self {
        self.toll = 1;
        self
    }

    pub fn with_door(mut self, door: Option<DoorId>) -> Self {
        self.door = door;
        self
    }
}

/// Hands out vertex, edge and door ids in creation order, so a reduction
/// run twice on the same instance yields the same level.
#[derive(Debug, Default)]
pub(crate) struct LevelBuilder {
    level: Level,
}

impl LevelBuilder {
    pub fn new() -> Self {
        LevelBuilder::default()
    }

    pub fn vertex(&mut self) -> VertexId {
        let id = self.level.vertices.len() as VertexId;
        self.level.vertices.push(VertexSpec { id, ..Default::default() });
        id
    }

    pub fn door(&mut self, initially_open: bool) -> DoorId {
        let id = self.level.doors.len() as DoorId;
        self.level.doors.push(DoorSpec { id, initially_open });
        id
    }

    pub fn edge(&mut self, from: VertexId, to: VertexId, opts: EdgeOpts) -> EdgeId {
        let id = self.level.edges.len() as EdgeId;
        self.level.edges.push(EdgeSpec {
            id,
            from,
            to,
            one_way: opts.one_way,
            single_use: opts.single_use,
            toll: opts.toll,
            door: opts.door,
        });
        id
    }

    pub fn at(&mut self, v: VertexId) -> &mut VertexSpec {
        &mut self.level.vertices[v as usize]
    }

    pub fn plate(&mut self, v: VertexId, action: DoorAction) {
        self.at(v).plates.push(action);
    }

    /// Returns the new button's index at `v`.
    pub fn button(&mut self, v: VertexId, actions: Button) -> u32 {
        let buttons = &mut self.at(v).buttons;
        buttons.push(actions);
        (buttons.len() - 1) as u32
    }

    pub fn level_mut(&mut self) -> &mut Level {
        &mut self.level
    }

    pub fn finish(self) -> Level {
        self.level
    }
}

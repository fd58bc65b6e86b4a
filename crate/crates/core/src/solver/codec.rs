//! Packs a [`GameState`] into a few machine words: one bit per door, one bit
//! per single-use edge and per must-visit vertex, and just enough bits for the
//! position, carried counts and remaining item piles.

use fixedbitset::FixedBitSet;

use crate::arena::{GameState, Level};

fn bits_for(max: u64) -> u32 {
    64 - max.leading_zeros()
}

#[derive(Clone, Debug)]
pub(crate) struct StateCodec {
    position_bits: u32,
    token_bits: u32,
    key_bits: u32,
    doors: usize,
    single_use: Vec<usize>,
    must_visit: Vec<usize>,
    /// (vertex, bits) for every vertex with a token pile.
    token_piles: Vec<(usize, u32)>,
    key_piles: Vec<(usize, u32)>,
    has_token_piles: bool,
    has_key_piles: bool,
    vertices: usize,
    edges: usize,
    words: usize,
}

struct Writer {
    words: Vec<u64>,
    bit: usize,
}

impl Writer {
    fn put(&mut self, value: u64, bits: u32) {
        if bits == 0 {
            return;
        }
        let word = self.bit / 64;
        let offset = self.bit % 64;
        self.words[word] |= value << offset;
        if offset + bits as usize > 64 {
            self.words[word + 1] |= value >> (64 - offset);
        }
        self.bit += bits as usize;
    }
}

struct Reader<'a> {
    words: &'a [u64],
    bit: usize,
}

impl Reader<'_> {
    fn get(&mut self, bits: u32) -> u64 {
        if bits == 0 {
            return 0;
        }
        let word = self.bit / 64;
        let offset = self.bit % 64;
        let mut value = self.words[word] >> offset;
        if offset + bits as usize > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        self.bit += bits as usize;
        if bits == 64 {
            value
        } else {
            value & ((1u64 << bits) - 1)
        }
    }
}

impl StateCodec {
    pub(crate) fn new(level: &Level) -> Self {
        let max_tokens = (u64::from(level.initial_tokens) + level.total_placed_tokens())
            .min(u64::from(level.token_capacity.limit()));
        let max_keys = (u64::from(level.initial_keys) + level.total_placed_keys())
            .min(u64::from(level.key_capacity.limit()));
        let token_piles: Vec<(usize, u32)> = level
            .vertices
            .iter()
            .filter(|v| v.tokens > 0)
            .map(|v| (v.id as usize, bits_for(u64::from(v.tokens))))
            .collect();
        let key_piles: Vec<(usize, u32)> = level
            .vertices
            .iter()
            .filter(|v| v.keys > 0)
            .map(|v| (v.id as usize, bits_for(u64::from(v.keys))))
            .collect();
        let mut codec = StateCodec {
            position_bits: bits_for(level.vertices.len().saturating_sub(1) as u64),
            token_bits: bits_for(max_tokens),
            key_bits: bits_for(max_keys),
            doors: level.doors.len(),
            single_use: level.edges.iter().filter(|e| e.single_use).map(|e| e.id as usize).collect(),
            must_visit: level.must_visit().map(|v| v as usize).collect(),
            has_token_piles: !token_piles.is_empty(),
            has_key_piles: !key_piles.is_empty(),
            token_piles,
            key_piles,
            vertices: level.vertices.len(),
            edges: level.edges.len(),
            words: 0,
        };
        let total = codec.position_bits as usize
            + codec.token_bits as usize
            + codec.key_bits as usize
            + codec.doors
            + codec.single_use.len()
            + codec.must_visit.len()
            + codec.token_piles.iter().map(|p| p.1 as usize).sum::<usize>()
            + codec.key_piles.iter().map(|p| p.1 as usize).sum::<usize>();
        codec.words = total.div_ceil(64).max(1);
        codec
    }

    pub(crate) fn encode(&self, s: &GameState) -> Box<[u64]> {
        let mut w = Writer { words: vec![0; self.words], bit: 0 };
        w.put(u64::from(s.position), self.position_bits);
        w.put(u64::from(s.tokens_held), self.token_bits);
        w.put(u64::from(s.keys_held), self.key_bits);
        for d in 0..self.doors {
            w.put(u64::from(s.open_doors.contains(d)), 1);
        }
        for &e in &self.single_use {
            w.put(u64::from(s.consumed_edges.contains(e)), 1);
        }
        for &v in &self.must_visit {
            w.put(u64::from(s.visited.contains(v)), 1);
        }
        for &(v, bits) in &self.token_piles {
            w.put(u64::from(s.tokens_left[v]), bits);
        }
        for &(v, bits) in &self.key_piles {
            w.put(u64::from(s.keys_left[v]), bits);
        }
        w.words.into_boxed_slice()
    }

    pub(crate) fn decode(&self, words: &[u64]) -> GameState {
        let mut r = Reader { words, bit: 0 };
        let position = r.get(self.position_bits) as u32;
        let tokens_held = r.get(self.token_bits) as u32;
        let keys_held = r.get(self.key_bits) as u32;
        let mut open_doors = FixedBitSet::with_capacity(self.doors);
        for d in 0..self.doors {
            open_doors.set(d, r.get(1) == 1);
        }
        let mut consumed_edges = FixedBitSet::with_capacity(self.edges);
        for &e in &self.single_use {
            consumed_edges.set(e, r.get(1) == 1);
        }
        let mut visited = FixedBitSet::with_capacity(self.vertices);
        for &v in &self.must_visit {
            visited.set(v, r.get(1) == 1);
        }
        let mut tokens_left = if self.has_token_piles { vec![0; self.vertices] } else { Vec::new() };
        for &(v, bits) in &self.token_piles {
            tokens_left[v] = r.get(bits) as u32;
        }
        let mut keys_left = if self.has_key_piles { vec![0; self.vertices] } else { Vec::new() };
        for &(v, bits) in &self.key_piles {
            keys_left[v] = r.get(bits) as u32;
        }
        GameState {
            position,
            tokens_held,
            keys_held,
            open_doors,
            consumed_edges,
            visited,
            tokens_left,
            keys_left,
        }
    }
}

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    Fin(usize),
    /// Offsets 0, 1, 2, ... in ascending order.
    Omega,
    /// Offsets ..., 2, 1, 0 in ascending order (reverse omega).
    OmegaOpp,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Fin(n) => write!(f, "FIN({n})"),
            Block::Omega => write!(f, "OMEGA"),
            Block::OmegaOpp => write!(f, "OMEGA_OPP"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub block: usize,
    pub offset: usize,
}

impl Position {
    pub fn new(block: usize, offset: usize) -> Self {
        Position { block, offset }
    }
}

/// Cut inside the first block an initial segment does not fully contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cut {
    /// First `k` offsets of a FIN or OMEGA block.
    Count(usize),
    /// Nothing of an OMEGA_OPP block.
    Empty,
    /// Offsets `>= k` of an OMEGA_OPP block (all but the last `k`), `k >= 1`.
    Cofinite(usize),
}

/// A downward-closed subset of I in canonical form: every block before
/// `block` is fully contained, `cut` describes the part of `block`.
/// `block == blocks.len()` denotes S = I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InitialSegment {
    block: usize,
    cut: Cut,
}

impl InitialSegment {
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn cut(&self) -> Cut {
        self.cut
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Pos(Position),
    Mark(InitialSegment),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexStructure {
    blocks: Vec<Block>,
}

impl IndexStructure {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::domain("index structure needs at least one block"));
        }
        if blocks.iter().any(|b| *b == Block::Fin(0)) {
            return Err(Error::domain("FIN blocks need n >= 1"));
        }
        Ok(IndexStructure { blocks })
    }

    pub fn fin(n: usize) -> Result<Self> {
        Self::new(vec![Block::Fin(n)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn single_fin(&self) -> Option<usize> {
        match self.blocks.as_slice() {
            [Block::Fin(n)] => Some(*n),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|b| matches!(b, Block::Fin(_)))
    }

    pub fn check_position(&self, p: Position) -> Result<()> {
        match self.blocks.get(p.block) {
            None => Err(Error::domain(format!("no block {}", p.block))),
            Some(Block::Fin(n)) if p.offset >= *n => {
                Err(Error::domain(format!("offset {} outside FIN({n})", p.offset)))
            }
            _ => Ok(()),
        }
    }

    /// Canonical initial segment for a per-block cut description.
    pub fn segment(&self, block: usize, cut: Cut) -> Result<InitialSegment> {
        if block >= self.blocks.len() {
            if block == self.blocks.len() && matches!(cut, Cut::Count(0) | Cut::Empty) {
                return Ok(self.whole());
            }
            return Err(Error::domain(format!("no block {block}")));
        }
        match (self.blocks[block], cut) {
            (Block::Fin(n), Cut::Count(k)) if k == n => Ok(self.block_start(block + 1)),
            (Block::Fin(n), Cut::Count(k)) if k < n => Ok(InitialSegment { block, cut }),
            (Block::Omega, Cut::Count(_)) => Ok(InitialSegment { block, cut }),
            (Block::OmegaOpp, Cut::Empty | Cut::Count(0)) => Ok(InitialSegment { block, cut: Cut::Empty }),
            (Block::OmegaOpp, Cut::Cofinite(0)) => Ok(self.block_start(block + 1)),
            (Block::OmegaOpp, Cut::Cofinite(_)) => Ok(InitialSegment { block, cut }),
            (b, c) => Err(Error::domain(format!("cut {c:?} is not valid for block {b}"))),
        }
    }

    /// The segment made of all blocks before `block`.
    pub fn block_start(&self, block: usize) -> InitialSegment {
        match self.blocks.get(block) {
            None => self.whole(),
            Some(Block::OmegaOpp) => InitialSegment { block, cut: Cut::Empty },
            Some(_) => InitialSegment { block, cut: Cut::Count(0) },
        }
    }

    pub fn empty(&self) -> InitialSegment {
        self.block_start(0)
    }

    pub fn whole(&self) -> InitialSegment {
        InitialSegment { block: self.blocks.len(), cut: Cut::Count(0) }
    }

    pub fn is_whole(&self, s: &InitialSegment) -> bool {
        s.block >= self.blocks.len()
    }

    pub fn is_empty_segment(&self, s: &InitialSegment) -> bool {
        *s == self.empty()
    }

    /// {q : q < p}
    pub fn segment_before(&self, p: Position) -> InitialSegment {
        match self.blocks[p.block] {
            Block::OmegaOpp => InitialSegment { block: p.block, cut: Cut::Cofinite(p.offset + 1) },
            _ => InitialSegment { block: p.block, cut: Cut::Count(p.offset) },
        }
    }

    /// {q : q <= p}
    pub fn segment_after(&self, p: Position) -> InitialSegment {
        match self.blocks[p.block] {
            Block::OmegaOpp if p.offset == 0 => self.block_start(p.block + 1),
            Block::OmegaOpp => InitialSegment { block: p.block, cut: Cut::Cofinite(p.offset) },
            Block::Fin(n) if p.offset + 1 == n => self.block_start(p.block + 1),
            _ => InitialSegment { block: p.block, cut: Cut::Count(p.offset + 1) },
        }
    }

    pub fn contains(&self, s: &InitialSegment, p: Position) -> bool {
        if p.block != s.block {
            return p.block < s.block;
        }
        match s.cut {
            Cut::Count(k) => p.offset < k,
            Cut::Empty => false,
            Cut::Cofinite(k) => p.offset >= k,
        }
    }

    pub fn position_key(&self, p: Position) -> (usize, i64) {
        let k = p.offset as i64;
        match self.blocks[p.block] {
            Block::OmegaOpp => (p.block, -(2 * k + 1)),
            _ => (p.block, 2 * k + 1),
        }
    }

    /// Key of the marker slot i_S: above every position of S, below the rest.
    pub fn segment_key(&self, s: &InitialSegment) -> (usize, i64) {
        match s.cut {
            Cut::Count(k) => (s.block, 2 * k as i64),
            Cut::Empty => (s.block, i64::MIN),
            Cut::Cofinite(k) => (s.block, -2 * k as i64),
        }
    }

    pub fn slot_key(&self, s: &Slot) -> (usize, i64) {
        match s {
            Slot::Pos(p) => self.position_key(*p),
            Slot::Mark(m) => self.segment_key(m),
        }
    }

    pub fn compare_segments(&self, a: &InitialSegment, b: &InitialSegment) -> Ordering {
        self.segment_key(a).cmp(&self.segment_key(b))
    }

    /// min(I \ S), when it exists.
    pub fn first_outside(&self, s: &InitialSegment) -> Option<Position> {
        if self.is_whole(s) {
            return None;
        }
        match s.cut {
            Cut::Count(k) => Some(Position::new(s.block, k)),
            Cut::Empty => None,
            Cut::Cofinite(k) => Some(Position::new(s.block, k - 1)),
        }
    }

    /// A position in U \ S for S ⊊ U: the minimum when it exists.
    pub fn position_between(&self, s: &InitialSegment, u: &InitialSegment) -> Option<Position> {
        if self.compare_segments(s, u) != Ordering::Less {
            return None;
        }
        if let Some(p) = self.first_outside(s) {
            return self.contains(u, p).then_some(p);
        }
        // S ends with an empty cut of a reverse-omega block: pick the least
        // significant offset of that block that U still holds.
        if u.block > s.block {
            Some(Position::new(s.block, 0))
        } else if let Cut::Cofinite(k) = u.cut {
            Some(Position::new(s.block, k))
        } else {
            None
        }
    }

    pub fn format_segment(&self, s: &InitialSegment) -> String {
        if self.is_whole(s) {
            return match self.single_fin() {
                Some(n) => n.to_string(),
                None => "end".to_string(),
            };
        }
        match (self.single_fin().is_some() || self.blocks.len() == 1, s.cut) {
            (true, Cut::Count(k)) => k.to_string(),
            (_, Cut::Count(k)) => format!("{}:{k}", s.block),
            (_, Cut::Empty) => format!("{}:empty", s.block),
            (_, Cut::Cofinite(k)) => format!("{}:cof{k}", s.block),
        }
    }
}

impl fmt::Display for IndexStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

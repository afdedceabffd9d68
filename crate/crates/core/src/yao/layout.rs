use alloc::vec::Vec;

use super::YaoError;

/// Largest wire count a basis index can carry.
pub const MAX_WIRES: usize = 128;

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Wire assignment for a window of `2t+1` cells around the origin. Wires are
/// zero-based: the processor occupies `0..l0`, cell `c` occupies the `l` wires
/// starting at `l0 + (c + t) l`, symbol bits first, then the two marker bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WireLayout {
    states: usize,
    symbols: usize,
    state_bits: usize,
    symbol_bits: usize,
    steps: usize,
}

impl WireLayout {
    pub fn new(states: usize, symbols: usize, steps: usize) -> Result<Self, YaoError> {
        let layout = Self {
            states,
            symbols,
            state_bits: ceil_log2(states),
            symbol_bits: ceil_log2(symbols),
            steps,
        };
        if steps == 0 {
            return Err(YaoError::NoSteps);
        }
        if layout.wires() > MAX_WIRES {
            return Err(YaoError::TooManyWires(layout.wires()));
        }
        Ok(layout)
    }

    /// Layout of the three-cell neighbourhood G1 acts on.
    pub fn local(states: usize, symbols: usize) -> Self {
        Self {
            states,
            symbols,
            state_bits: ceil_log2(states),
            symbol_bits: ceil_log2(symbols),
            steps: 1,
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// `l0`.
    pub fn state_bits(&self) -> usize {
        self.state_bits
    }

    pub fn symbol_bits(&self) -> usize {
        self.symbol_bits
    }

    /// `l`: symbol bits plus two marker bits.
    pub fn cell_width(&self) -> usize {
        self.symbol_bits + 2
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn cells(&self) -> usize {
        2 * self.steps + 1
    }

    pub fn wires(&self) -> usize {
        self.state_bits + self.cells() * self.cell_width()
    }

    /// Leftmost and rightmost cell of the window.
    pub fn cell_range(&self) -> (i64, i64) {
        let t = self.steps as i64;
        (-t, t)
    }

    pub fn contains(&self, cell: i64) -> bool {
        let (lo, hi) = self.cell_range();
        (lo..=hi).contains(&cell)
    }

    /// First wire of `cell`.
    pub fn cell_offset(&self, cell: i64) -> usize {
        debug_assert!(self.contains(cell));
        self.state_bits + (cell + self.steps as i64) as usize * self.cell_width()
    }

    pub fn cell_wires(&self, cell: i64) -> core::ops::Range<usize> {
        let o = self.cell_offset(cell);
        o..o + self.cell_width()
    }

    /// The two marker wires of `cell`, high bit first.
    pub fn marker_wires(&self, cell: i64) -> (usize, usize) {
        let o = self.cell_offset(cell) + self.symbol_bits;
        (o, o + 1)
    }

    /// Number of G1 placements per step.
    pub fn placements(&self) -> usize {
        2 * self.steps - 1
    }

    /// Pins of the `j`-th placement (1-based): processor wires, then cells
    /// `j-t-1`, `j-t`, `j-t+1` left to right.
    pub fn g1_pins(&self, j: usize) -> Vec<usize> {
        debug_assert!((1..=self.placements()).contains(&j));
        let centre = j as i64 - self.steps as i64;
        let mut pins: Vec<usize> = (0..self.state_bits).collect();
        for cell in centre - 1..=centre + 1 {
            pins.extend(self.cell_wires(cell));
        }
        pins
    }

    /// Wire count of G1.
    pub fn g1_wires(&self) -> usize {
        self.state_bits + 3 * self.cell_width()
    }
}

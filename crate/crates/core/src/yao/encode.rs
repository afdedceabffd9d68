use alloc::vec::Vec;

use super::{WireLayout, YaoError};
use crate::qtm::Configuration;

/// Head-marker values of a cell's two `s` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Marker {
    /// `00`
    Idle,
    /// `01`: the head is here and about to act.
    Head,
    /// `10`: the head has just arrived.
    Arrived,
    /// `11`, never reachable.
    Forbidden,
}

impl Marker {
    pub fn bits(self) -> u128 {
        match self {
            Self::Idle => 0,
            Self::Head => 1,
            Self::Arrived => 2,
            Self::Forbidden => 3,
        }
    }

    pub fn from_bits(b: u128) -> Self {
        match b & 3 {
            0 => Self::Idle,
            1 => Self::Head,
            2 => Self::Arrived,
            _ => Self::Forbidden,
        }
    }
}

/// Basis index of G1's neighbourhood `|q; σ1 s1; σ2 s2; σ3 s3⟩`.
pub fn local_index(layout: &WireLayout, state: usize, cells: [(usize, Marker); 3]) -> usize {
    let mut idx = state;
    for (sigma, s) in cells {
        idx = (idx << layout.cell_width()) | (sigma << 2) | s.bits() as usize;
    }
    idx
}

/// Inverse of [`local_index`].
pub fn split_local(layout: &WireLayout, idx: usize) -> (usize, [(usize, Marker); 3]) {
    let l = layout.cell_width();
    let cell = |k: usize| {
        let v = (idx >> ((2 - k) * l)) & ((1 << l) - 1);
        (v >> 2, Marker::from_bits(v as u128))
    };
    (idx >> (3 * l), [cell(0), cell(1), cell(2)])
}

/// Basis index of the whole window, processor bits most significant.
pub fn encode_cells(
    layout: &WireLayout,
    state: usize,
    mut cell: impl FnMut(i64) -> (usize, Marker),
) -> u128 {
    let mut key = state as u128;
    let (lo, hi) = layout.cell_range();
    for c in lo..=hi {
        let (sigma, s) = cell(c);
        key = (key << layout.cell_width()) | ((sigma as u128) << 2) | s.bits();
    }
    key
}

/// Initial window for input `x` written from cell 0, head marker on cell 0.
pub fn encode_input(x: &[usize], layout: &WireLayout, initial: usize) -> Result<u128, YaoError> {
    let max = layout.steps() + 1;
    if x.len() > max {
        return Err(YaoError::InputTooLong { len: x.len(), max });
    }
    if let Some(&bad) = x.iter().find(|&&s| s >= layout.symbols()) {
        return Err(YaoError::UnknownSymbol(bad));
    }
    Ok(encode_cells(layout, initial, |c| {
        let sigma = if c >= 0 {
            x.get(c as usize).copied().unwrap_or(0)
        } else {
            0
        };
        (sigma, if c == 0 { Marker::Head } else { Marker::Idle })
    }))
}

/// Encodes a machine configuration whose head and written cells lie in the window.
pub fn encode_configuration(c: &Configuration, layout: &WireLayout) -> Result<u128, YaoError> {
    if !layout.contains(c.head) {
        return Err(YaoError::OutsideWindow { cell: c.head });
    }
    if let Some((cell, _)) = c
        .cells()
        .find(|&(cell, s)| s != 0 && !layout.contains(cell))
    {
        return Err(YaoError::OutsideWindow { cell });
    }
    Ok(encode_cells(layout, c.state, |cell| {
        (
            c.read(cell),
            if cell == c.head {
                Marker::Head
            } else {
                Marker::Idle
            },
        )
    }))
}

/// Symbol bits and marker of one cell.
pub fn cell_contents(key: u128, layout: &WireLayout, cell: i64) -> (usize, Marker) {
    let (_, hi) = layout.cell_range();
    let shift = (hi - cell) as usize * layout.cell_width();
    let v = (key >> shift) & ((1u128 << layout.cell_width()) - 1);
    ((v >> 2) as usize, Marker::from_bits(v))
}

pub fn processor_state(key: u128, layout: &WireLayout) -> usize {
    (key >> (layout.cells() * layout.cell_width())) as usize
}

/// Window string over Σ; processor and marker bits are ignored.
pub fn decode_output(key: u128, layout: &WireLayout) -> Result<Vec<usize>, YaoError> {
    let (lo, hi) = layout.cell_range();
    (lo..=hi)
        .map(|cell| {
            let (sigma, _) = cell_contents(key, layout, cell);
            if sigma >= layout.symbols() {
                Err(YaoError::BadSymbol {
                    cell,
                    pattern: sigma,
                })
            } else {
                Ok(sigma)
            }
        })
        .collect()
}

/// Configuration encoded by `key` if exactly one cell carries the head marker
/// and every other marker is idle.
pub fn decode_configuration(
    key: u128,
    layout: &WireLayout,
) -> Result<Option<Configuration>, YaoError> {
    let tape = decode_output(key, layout)?;
    let (lo, hi) = layout.cell_range();
    let mut head = None;
    for cell in lo..=hi {
        match cell_contents(key, layout, cell).1 {
            Marker::Idle => {}
            Marker::Head if head.is_none() => head = Some(cell),
            _ => return Ok(None),
        }
    }
    let Some(head) = head else { return Ok(None) };
    let mut c = Configuration::new(processor_state(key, layout), head);
    for (i, &s) in tape.iter().enumerate() {
        c.write(lo + i as i64, s);
    }
    Ok(Some(c))
}

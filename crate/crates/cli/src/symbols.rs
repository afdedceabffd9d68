use crate::error::FormatError;

/// One-character display names of the alphabet; index 0 is the blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<char>,
}

const DEFAULT_NAMES: &str = "0123456789abcdefghijklmnopqrstuvwxyz";

impl Symbols {
    pub fn new(names: Vec<char>) -> Result<Self, FormatError> {
        for (i, c) in names.iter().enumerate() {
            if c.is_whitespace() || c == &',' {
                return Err(FormatError::plain(format!(
                    "symbol name {c:?} is not allowed"
                )));
            }
            if names[..i].contains(c) {
                return Err(FormatError::plain(format!(
                    "symbol name {c:?} appears twice"
                )));
            }
        }
        Ok(Self { names })
    }

    /// Symbol `i` is named by the `i`-th of `0-9a-z`.
    pub fn default_for(count: usize) -> Result<Self, FormatError> {
        if count > DEFAULT_NAMES.len() {
            return Err(FormatError::plain(format!(
                "{count} symbols need explicit names"
            )));
        }
        Ok(Self {
            names: DEFAULT_NAMES.chars().take(count).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    /// Symbol indices of `s`; unknown characters are an error.
    pub fn parse(&self, s: &str) -> Result<Vec<usize>, FormatError> {
        s.chars()
            .map(|c| {
                self.names.iter().position(|&n| n == c).ok_or_else(|| {
                    FormatError::plain(format!("symbol {c:?} is not in the alphabet"))
                })
            })
            .collect()
    }

    pub fn render(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&i| self.names.get(i).copied().unwrap_or('?'))
            .collect()
    }

    /// The `symbols` line of the text formats.
    pub fn line(&self) -> String {
        let mut s = String::from("symbols");
        for c in &self.names {
            s.push(' ');
            s.push(*c);
        }
        s
    }
}

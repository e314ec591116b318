//! Hamming distance for unbounded alphabets: frequent pattern letters go
//! through indicator correlations, rare ones through occurrence lists.

use std::collections::HashMap;
use std::sync::Arc;

use super::engine::{Channel, ConvolutionEngine, CorrelationJob};
use super::heavy_threshold;
use crate::strings::Symbol;

#[derive(Debug)]
enum Stage {
    Count { next: usize },
    Lists { next: usize },
    Heavy,
    Walk { k: usize, pos: Option<usize> },
    Finish { next: usize },
    Done,
}

#[derive(Debug, Default, Clone, Copy)]
struct Freq {
    count: usize,
    listed: bool,
}

#[derive(Debug)]
pub(crate) struct LargeHdJob {
    engine: Arc<ConvolutionEngine>,
    n: usize,
    m: usize,
    theta: usize,
    stage: Stage,
    freq: HashMap<Symbol, Freq>,
    heavy_letters: Vec<Symbol>,
    occ: HashMap<Symbol, Vec<u32>>,
    heavy: Option<CorrelationJob>,
    heavy_matches: Vec<i128>,
    light_matches: Vec<u32>,
    values: Vec<i128>,
}

impl LargeHdJob {
    pub(crate) fn new(engine: Arc<ConvolutionEngine>, n: usize, m: usize) -> Self {
        LargeHdJob {
            engine,
            n,
            m,
            theta: heavy_threshold(n).max(1),
            stage: Stage::Count { next: 0 },
            freq: HashMap::new(),
            heavy_letters: Vec::new(),
            occ: HashMap::new(),
            heavy: None,
            heavy_matches: Vec::new(),
            light_matches: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Upper bound on units for any input of these lengths.
    pub(crate) fn declared(engine: &ConvolutionEngine, n: usize, m: usize) -> u64 {
        let theta = heavy_threshold(n).max(1);
        let outputs = (n - m + 1) as u64;
        let heavy = CorrelationJob::cost(engine.size(), m / theta, engine.prime_count(), n, m);
        // walk: one lookup per text position plus fewer than theta hits each
        2 * m as u64 + heavy + (n * theta) as u64 + outputs
    }

    pub(crate) fn is_done(&self) -> bool {
        matches!(self.stage, Stage::Done)
    }

    pub(crate) fn into_values(self) -> Vec<i128> {
        self.values
    }

    pub(crate) fn advance(&mut self, pattern: &[Symbol], text: &[Symbol], budget: u64) -> u64 {
        let outputs = self.n - self.m + 1;
        let mut left = budget;
        while left > 0 {
            match self.stage {
                Stage::Count { next } => {
                    let end = (next as u64 + left).min(self.m as u64) as usize;
                    for &a in &pattern[next..end] {
                        self.freq.entry(a).or_default().count += 1;
                    }
                    left -= (end - next) as u64;
                    self.stage = if end == self.m {
                        Stage::Lists { next: 0 }
                    } else {
                        Stage::Count { next: end }
                    };
                }
                Stage::Lists { next } => {
                    let end = (next as u64 + left).min(self.m as u64) as usize;
                    for (j, &a) in pattern.iter().enumerate().take(end).skip(next) {
                        let f = self.freq.get_mut(&a).expect("counted letter");
                        if f.count >= self.theta {
                            if !f.listed {
                                f.listed = true;
                                self.heavy_letters.push(a);
                            }
                        } else {
                            self.occ.entry(a).or_default().push(j as u32);
                        }
                    }
                    left -= (end - next) as u64;
                    if end == self.m {
                        self.freq = HashMap::new();
                        let channels = self.heavy_letters.iter().map(|&a| Channel::matching(a));
                        self.heavy = Some(CorrelationJob::new(
                            self.engine.clone(),
                            channels.collect(),
                            self.n,
                            self.m,
                        ));
                        self.stage = Stage::Heavy;
                    } else {
                        self.stage = Stage::Lists { next: end };
                    }
                }
                Stage::Heavy => {
                    let job = self.heavy.as_mut().expect("heavy job");
                    if !job.is_done() {
                        left -= job.advance(pattern, text, left);
                    }
                    if job.is_done() {
                        self.heavy_matches = job.take_result();
                        self.heavy = None;
                        self.light_matches = vec![0; outputs];
                        self.stage = Stage::Walk { k: 0, pos: None };
                    }
                }
                Stage::Walk { k, pos } => {
                    if k == self.n {
                        self.occ = HashMap::new();
                        self.values = Vec::with_capacity(outputs);
                        self.stage = Stage::Finish { next: 0 };
                        continue;
                    }
                    let list = self.occ.get(&text[k]).map(Vec::as_slice).unwrap_or(&[]);
                    match pos {
                        None => {
                            left -= 1;
                            self.stage = if list.is_empty() {
                                Stage::Walk { k: k + 1, pos: None }
                            } else {
                                Stage::Walk { k, pos: Some(0) }
                            };
                        }
                        Some(s) => {
                            let end = (s as u64 + left).min(list.len() as u64) as usize;
                            for &j in &list[s..end] {
                                let j = j as usize;
                                if j <= k && k - j < outputs {
                                    self.light_matches[k - j] += 1;
                                }
                            }
                            left -= (end - s) as u64;
                            self.stage = if end == list.len() {
                                Stage::Walk { k: k + 1, pos: None }
                            } else {
                                Stage::Walk { k, pos: Some(end) }
                            };
                        }
                    }
                }
                Stage::Finish { next } => {
                    let end = (next as u64 + left).min(outputs as u64) as usize;
                    let m = self.m as i128;
                    for i in next..end {
                        self.values
                            .push(m - self.heavy_matches[i] - self.light_matches[i] as i128);
                    }
                    left -= (end - next) as u64;
                    if end == outputs {
                        self.heavy_matches = Vec::new();
                        self.light_matches = Vec::new();
                        self.stage = Stage::Done;
                    } else {
                        self.stage = Stage::Finish { next: end };
                    }
                }
                Stage::Done => break,
            }
        }
        budget - left
    }
}

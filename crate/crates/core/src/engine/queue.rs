//! Time-ordered event queue with insertion-order tie-breaking.

use alloc::collections::BinaryHeap;
use core::cmp::{Ordering, Reverse};
use core::fmt;

/// An event waiting in the queue.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheduled<K> {
    pub time_s: f64,
    pub seq: u64,
    pub kind: K,
}

struct Entry<K>(Scheduled<K>);

impl<K> PartialEq for Entry<K> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<K> Eq for Entry<K> {}
impl<K> PartialOrd for Entry<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<K> Ord for Entry<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .time_s
            .total_cmp(&other.0.time_s)
            .then(self.0.seq.cmp(&other.0.seq))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QueueError {
    /// The event would fire before the current clock.
    BackInTime {
        at: f64,
        clock: f64,
    },
    NotFinite,
}

impl fmt::Display for QueueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueueError::BackInTime { at, clock } => {
                write!(
                    f,
                    "event scheduled at {at} s, before the clock at {clock} s"
                )
            }
            QueueError::NotFinite => write!(f, "event time is not finite"),
        }
    }
}

impl core::error::Error for QueueError {}

pub struct EventQueue<K> {
    heap: BinaryHeap<Reverse<Entry<K>>>,
    clock: f64,
    next_seq: u64,
    popped: u64,
}

impl<K> Default for EventQueue<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> EventQueue<K> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            clock: 0.0,
            next_seq: 0,
            popped: 0,
        }
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    /// Events ever scheduled.
    pub fn scheduled(&self) -> u64 {
        self.next_seq
    }

    /// Events ever dequeued.
    pub fn popped(&self) -> u64 {
        self.popped
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn schedule(&mut self, time_s: f64, kind: K) -> Result<u64, QueueError> {
        if !time_s.is_finite() {
            return Err(QueueError::NotFinite);
        }
        if time_s < self.clock {
            return Err(QueueError::BackInTime {
                at: time_s,
                clock: self.clock,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap
            .push(Reverse(Entry(Scheduled { time_s, seq, kind })));
        Ok(seq)
    }

    /// Removes the earliest event and advances the clock to it.
    pub fn pop(&mut self) -> Option<Scheduled<K>> {
        let Reverse(Entry(ev)) = self.heap.pop()?;
        debug_assert!(ev.time_s >= self.clock);
        self.clock = ev.time_s;
        self.popped += 1;
        Some(ev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn same_time_is_fifo() {
        let mut q = EventQueue::new();
        q.schedule(1.0, 'a').unwrap();
        q.schedule(1.0, 'b').unwrap();
        q.schedule(0.5, 'c').unwrap();
        let order: Vec<char> = core::iter::from_fn(|| q.pop().map(|e| e.kind)).collect();
        assert_eq!(order, ['c', 'a', 'b']);
    }

    #[test]
    fn now_precedes_later() {
        let mut q = EventQueue::new();
        q.schedule(2.0, 1).unwrap();
        q.pop();
        q.schedule(3.0, 2).unwrap();
        q.schedule(2.0, 3).unwrap();
        assert_eq!(q.pop().unwrap().kind, 3);
    }

    #[test]
    fn past_is_rejected() {
        let mut q = EventQueue::new();
        q.schedule(5.0, ()).unwrap();
        q.pop();
        assert_eq!(
            q.schedule(4.0, ()),
            Err(QueueError::BackInTime {
                at: 4.0,
                clock: 5.0
            })
        );
        assert_eq!(q.schedule(f64::NAN, ()), Err(QueueError::NotFinite));
        assert_eq!(q.scheduled(), 1);
    }

    proptest! {
        #[test]
        fn pops_in_lexicographic_order(times in prop::collection::vec(0u8..20, 1..200)) {
            let mut q = EventQueue::new();
            for t in &times {
                q.schedule(*t as f64, ()).unwrap();
            }
            let mut last = (f64::NEG_INFINITY, 0u64);
            let mut n = 0;
            while let Some(e) = q.pop() {
                prop_assert!(e.time_s > last.0 || (e.time_s == last.0 && e.seq > last.1) || n == 0);
                last = (e.time_s, e.seq);
                n += 1;
            }
            prop_assert_eq!(n, times.len());
            prop_assert_eq!(q.popped(), q.scheduled());
        }
    }
}

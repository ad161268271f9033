use std::collections::VecDeque;

use workbench_core::automaton::{PointerEvent, PointerKind};
use workbench_core::widget::UiValue;

/// A UI input waiting for the next step boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Param { widget_id: u32, value: UiValue },
    Pointer { widget_id: u32, event: PointerEvent },
    Geometry { widget_id: u32, x: i32, y: i32 },
}

pub const DEFAULT_CAPACITY: usize = 256;

/// FIFO of pending inputs. Once `capacity` is reached a new pointer move
/// replaces the newest queued move of the same widget, provided no press or
/// release for that widget follows it. Everything else is always kept.
#[derive(Debug, Clone)]
pub struct InputQueue {
    items: VecDeque<Input>,
    capacity: usize,
    coalesced: u64,
}

impl Default for InputQueue {
    fn default() -> Self {
        Self::new(DEFAULT_CAPACITY)
    }
}

impl InputQueue {
    pub fn new(capacity: usize) -> Self {
        Self {
            items: VecDeque::new(),
            capacity: capacity.max(1),
            coalesced: 0,
        }
    }

    pub fn push(&mut self, input: Input) {
        if self.items.len() >= self.capacity {
            if let Input::Pointer { widget_id, event } = &input {
                if event.kind == PointerKind::Move && self.coalesce(*widget_id, event) {
                    return;
                }
            }
        }
        self.items.push_back(input);
    }

    fn coalesce(&mut self, id: u32, event: &PointerEvent) -> bool {
        let last = self.items.iter_mut().rev().find_map(|i| match i {
            Input::Pointer { widget_id, event } if *widget_id == id => Some(event),
            _ => None,
        });
        match last {
            Some(prev) if prev.kind == PointerKind::Move && prev.button == event.button => {
                *prev = *event;
                self.coalesced += 1;
                true
            }
            _ => false,
        }
    }

    pub fn drain(&mut self) -> impl Iterator<Item = Input> + '_ {
        self.items.drain(..)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of move events merged into a later one so far.
    pub fn coalesced(&self) -> u64 {
        self.coalesced
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ptr(kind: PointerKind, x: f64) -> Input {
        Input::Pointer {
            widget_id: 1,
            event: PointerEvent::new(kind, 1, x, 0.0),
        }
    }

    #[test]
    fn below_capacity_keeps_everything() {
        let mut q = InputQueue::new(8);
        for i in 0..5 {
            q.push(ptr(PointerKind::Move, i as f64));
        }
        assert_eq!(q.len(), 5);
        assert_eq!(q.coalesced(), 0);
    }

    #[test]
    fn flood_keeps_press_release_and_tail() {
        let mut q = InputQueue::new(4);
        q.push(ptr(PointerKind::Press, 0.0));
        for i in 1..=1000 {
            q.push(ptr(PointerKind::Move, i as f64));
        }
        q.push(ptr(PointerKind::Release, 1001.0));
        let items: Vec<Input> = q.drain().collect();
        assert_eq!(items.first(), Some(&ptr(PointerKind::Press, 0.0)));
        assert_eq!(items.last(), Some(&ptr(PointerKind::Release, 1001.0)));
        assert_eq!(items[items.len() - 2], ptr(PointerKind::Move, 1000.0));
        assert!(items.len() <= 6);
    }

    #[test]
    fn writes_are_never_dropped() {
        let mut q = InputQueue::new(2);
        for i in 0..50 {
            q.push(Input::Param {
                widget_id: 0,
                value: UiValue::Number(i as f64),
            });
        }
        assert_eq!(q.len(), 50);
    }
}

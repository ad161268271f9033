//! Fan-out of engine events to connected clients.

use std::collections::{BTreeMap, VecDeque};
use std::sync::{Arc, Mutex};

use tokio::sync::Notify;

use super::frame::encode_image_frame;
use super::message::{error_json, frame_meta_json, layout_json, quit_json, report_json, values_json};
use crate::engine::EngineEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outgoing {
    Text(Arc<str>),
    Binary(Arc<Vec<u8>>),
}

type Images = Vec<(u32, Arc<Vec<u8>>)>;

#[derive(Default)]
struct ClientState {
    /// Text messages in order; frame metas carry their step.
    texts: VecDeque<(Arc<str>, Option<u64>)>,
    /// Latest image per widget, with the step it belongs to.
    images: BTreeMap<u32, (u64, Arc<Vec<u8>>)>,
    last_meta_step: Option<u64>,
    closed: bool,
}

/// Outgoing queue of one client. Text messages are never dropped; images
/// are latest-wins per widget and only leave together with, or after, the
/// frame meta of their own step.
#[derive(Default)]
pub struct ClientQueue {
    state: Mutex<ClientState>,
    notify: Notify,
}

impl ClientQueue {
    pub fn push_text(&self, text: Arc<str>) {
        let mut s = self.state.lock().unwrap();
        s.texts.push_back((text, None));
        drop(s);
        self.notify.notify_one();
    }

    fn push_frame(&self, meta: Arc<str>, step: u64, images: &Images) {
        let mut s = self.state.lock().unwrap();
        s.texts.push_back((meta, Some(step)));
        for (id, bytes) in images {
            s.images.insert(*id, (step, bytes.clone()));
        }
        drop(s);
        self.notify.notify_one();
    }

    pub fn close(&self) {
        self.state.lock().unwrap().closed = true;
        self.notify.notify_one();
    }

    fn drain(s: &mut ClientState) -> Vec<Outgoing> {
        let mut out = Vec::new();
        while let Some((text, step)) = s.texts.pop_front() {
            if step.is_some() {
                s.last_meta_step = step;
            }
            out.push(Outgoing::Text(text));
        }
        if let Some(last) = s.last_meta_step {
            let ready: Vec<u32> = s.images.iter().filter(|(_, (st, _))| *st <= last).map(|(id, _)| *id).collect();
            for id in ready {
                let (st, bytes) = s.images.remove(&id).expect("listed above");
                if st == last {
                    out.push(Outgoing::Binary(bytes));
                }
            }
        }
        out
    }

    /// Everything currently sendable, waiting if there is nothing. `None`
    /// once the queue is closed and empty.
    pub async fn next_batch(&self) -> Option<Vec<Outgoing>> {
        loop {
            {
                let mut s = self.state.lock().unwrap();
                let batch = Self::drain(&mut s);
                if !batch.is_empty() {
                    return Some(batch);
                }
                if s.closed {
                    return None;
                }
            }
            self.notify.notified().await;
        }
    }

    /// Non-blocking variant of [`next_batch`](Self::next_batch).
    pub fn try_batch(&self) -> Vec<Outgoing> {
        Self::drain(&mut self.state.lock().unwrap())
    }
}

#[derive(Default)]
struct HubInner {
    layout: Option<Arc<str>>,
    frame: Option<(Arc<str>, u64, Images)>,
    values: Option<Arc<str>>,
    clients: Vec<Arc<ClientQueue>>,
    closed: bool,
}

/// Single publisher, many subscribers. New subscribers first get the
/// current layout and the latest frame.
#[derive(Default)]
pub struct Hub {
    inner: Mutex<HubInner>,
    closed: Notify,
}

impl Hub {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn subscribe(&self) -> Arc<ClientQueue> {
        let q = Arc::new(ClientQueue::default());
        let mut inner = self.inner.lock().unwrap();
        if let Some(layout) = &inner.layout {
            q.push_text(layout.clone());
        }
        if let Some((meta, step, images)) = &inner.frame {
            q.push_frame(meta.clone(), *step, images);
        }
        if let Some(values) = &inner.values {
            q.push_text(values.clone());
        }
        if inner.closed {
            q.close();
        } else {
            inner.clients.push(q.clone());
        }
        q
    }

    pub fn unsubscribe(&self, q: &Arc<ClientQueue>) {
        self.inner.lock().unwrap().clients.retain(|c| !Arc::ptr_eq(c, q));
    }

    pub fn client_count(&self) -> usize {
        self.inner.lock().unwrap().clients.len()
    }

    pub fn is_closed(&self) -> bool {
        self.inner.lock().unwrap().closed
    }

    /// Resolves once the engine has quit.
    pub async fn wait_closed(&self) {
        loop {
            let notified = self.closed.notified();
            tokio::pin!(notified);
            notified.as_mut().enable();
            if self.is_closed() {
                return;
            }
            notified.await;
        }
    }

    fn broadcast(inner: &HubInner, text: Arc<str>) {
        for c in &inner.clients {
            c.push_text(text.clone());
        }
    }

    pub fn publish(&self, ev: EngineEvent) {
        let mut inner = self.inner.lock().unwrap();
        match ev {
            EngineEvent::Layout(layout) => {
                let text: Arc<str> = layout_json(&layout).into();
                inner.layout = Some(text.clone());
                inner.values = None;
                Self::broadcast(&inner, text);
            }
            EngineEvent::Frame(frame) => {
                let meta: Arc<str> = frame_meta_json(&frame).into();
                let images: Images = frame
                    .images
                    .iter()
                    .filter_map(|(id, buf)| encode_image_frame(*id, buf).ok().map(|b| (*id, Arc::new(b))))
                    .collect();
                for c in &inner.clients {
                    c.push_frame(meta.clone(), frame.step, &images);
                }
                inner.frame = Some((meta, frame.step, images));
                inner.values = None;
            }
            EngineEvent::Values { step, values } => {
                let text: Arc<str> = values_json(step, &values).into();
                inner.values = Some(text.clone());
                Self::broadcast(&inner, text);
            }
            EngineEvent::Error { code, detail } => Self::broadcast(&inner, error_json(code, &detail).into()),
            EngineEvent::Report(text) => Self::broadcast(&inner, report_json(&text).into()),
            EngineEvent::Quit => {
                Self::broadcast(&inner, quit_json().into());
                inner.closed = true;
                for c in inner.clients.drain(..) {
                    c.close();
                }
                self.closed.notify_waiters();
            }
        }
    }
}

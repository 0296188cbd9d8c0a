//! Fixed-capacity experience replay with uniform sampling.

use rand::Rng;

#[derive(Debug, Clone)]
pub struct Experience {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
}

#[derive(Debug)]
pub struct ReplayBuffer {
    buf: Vec<Experience>,
    capacity: usize,
    write: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> ReplayBuffer {
        ReplayBuffer {
            buf: Vec::with_capacity(capacity.min(4096)),
            capacity,
            write: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn push(&mut self, exp: Experience) {
        if self.buf.len() < self.capacity {
            self.buf.push(exp);
        } else {
            self.buf[self.write] = exp;
            self.write = (self.write + 1) % self.capacity;
        }
    }

    pub fn sample_one(&self, rng: &mut impl Rng) -> &Experience {
        &self.buf[rng.gen_range(0..self.buf.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(tag: f64) -> Experience {
        Experience {
            state: vec![tag],
            action: 0,
            reward: -0.1,
            next_state: vec![tag],
        }
    }

    #[test]
    fn ring_overwrites_oldest() {
        let mut rb = ReplayBuffer::new(3);
        for i in 0..5 {
            rb.push(exp(i as f64));
        }
        assert_eq!(rb.len(), 3);
        let tags: Vec<f64> = rb.buf.iter().map(|e| e.state[0]).collect();
        // slots 0,1 overwritten by 3,4; slot 2 still holds 2
        assert_eq!(tags, vec![3.0, 4.0, 2.0]);
    }

    #[test]
    fn sampling_is_uniform() {
        let mut rb = ReplayBuffer::new(8);
        for i in 0..8 {
            rb.push(exp(i as f64));
        }
        let mut rng = crate::rng::stream(3, "replay", 0);
        let mut counts = [0usize; 8];
        let draws = 80_000;
        for _ in 0..draws {
            counts[rb.sample_one(&mut rng).state[0] as usize] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.125).abs() < 0.01, "freq {freq}");
        }
    }
}

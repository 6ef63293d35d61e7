//! One-hidden-layer Q-network: `input -> hidden (ReLU) -> actions (linear)`.

use rand::Rng;

use crate::error::DivergenceError;

pub const DEFAULT_HIDDEN: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub input: usize,
    pub hidden: usize,
    pub output: usize,
    /// Row-major `hidden x input`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Row-major `output x hidden`.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Gradients with the same layout as [`Mlp`] parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// A regression target on a single output of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target<'a> {
    pub input: &'a [f64],
    pub action: usize,
    pub value: f64,
}

impl Mlp {
    pub fn zeros(input: usize, hidden: usize, output: usize) -> Self {
        Self {
            input,
            hidden,
            output,
            w1: vec![0.0; hidden * input],
            b1: vec![0.0; hidden],
            w2: vec![0.0; output * hidden],
            b2: vec![0.0; output],
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn glorot<R: Rng>(input: usize, hidden: usize, output: usize, rng: &mut R) -> Self {
        let mut net = Self::zeros(input, hidden, output);
        let l1 = (6.0 / (input + hidden) as f64).sqrt();
        let l2 = (6.0 / (hidden + output) as f64).sqrt();
        net.w1.iter_mut().for_each(|w| *w = rng.gen_range(-l1..l1));
        net.w2.iter_mut().for_each(|w| *w = rng.gen_range(-l2..l2));
        net
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    fn hidden_pre(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.input, "input dimension mismatch");
        (0..self.hidden)
            .map(|h| {
                let row = &self.w1[h * self.input..(h + 1) * self.input];
                self.b1[h] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
            })
            .collect()
    }

    fn output_from(&self, act: &[f64]) -> Vec<f64> {
        (0..self.output)
            .map(|o| {
                let row = &self.w2[o * self.hidden..(o + 1) * self.hidden];
                self.b2[o] + row.iter().zip(act).map(|(w, a)| w * a).sum::<f64>()
            })
            .collect()
    }

    /// Q-values for state `x`.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let act: Vec<f64> = self.hidden_pre(x).into_iter().map(relu).collect();
        self.output_from(&act)
    }

    /// Mean squared error over `targets` (only the targeted output of each
    /// sample contributes) and its gradient.
    pub fn loss_and_gradients(&self, targets: &[Target<'_>]) -> (f64, Gradients) {
        let mut g = Gradients {
            w1: vec![0.0; self.w1.len()],
            b1: vec![0.0; self.b1.len()],
            w2: vec![0.0; self.w2.len()],
            b2: vec![0.0; self.b2.len()],
        };
        if targets.is_empty() {
            return (0.0, g);
        }
        let scale = 1.0 / targets.len() as f64;
        let mut loss = 0.0;
        for t in targets {
            assert!(t.action < self.output, "action out of range");
            let pre = self.hidden_pre(t.input);
            let act: Vec<f64> = pre.iter().copied().map(relu).collect();
            let q = self.output_from(&act)[t.action];
            let err = q - t.value;
            loss += err * err * scale;
            let dq = 2.0 * err * scale;
            let a = t.action;
            g.b2[a] += dq;
            for h in 0..self.hidden {
                g.w2[a * self.hidden + h] += dq * act[h];
                if pre[h] > 0.0 {
                    let dh = dq * self.w2[a * self.hidden + h];
                    g.b1[h] += dh;
                    let row = &mut g.w1[h * self.input..(h + 1) * self.input];
                    for (gw, x) in row.iter_mut().zip(t.input) {
                        *gw += dh * x;
                    }
                }
            }
        }
        (loss, g)
    }

    /// Plain gradient descent step.
    pub fn apply(&mut self, g: &Gradients, lr: f64) {
        fn step(p: &mut [f64], g: &[f64], lr: f64) {
            p.iter_mut().zip(g).for_each(|(p, g)| *p -= lr * g);
        }
        step(&mut self.w1, &g.w1, lr);
        step(&mut self.b1, &g.b1, lr);
        step(&mut self.w2, &g.w2, lr);
        step(&mut self.b2, &g.b2, lr);
    }

    pub fn check_finite(&self) -> Result<(), DivergenceError> {
        let bad = [("w1", &self.w1), ("b1", &self.b1), ("w2", &self.w2), ("b2", &self.b2)]
            .into_iter()
            .find_map(|(n, v)| v.iter().position(|x| !x.is_finite()).map(|i| (n, i)));
        match bad {
            Some((layer, i)) => Err(DivergenceError(format!("non-finite parameter {layer}[{i}]"))),
            None => Ok(()),
        }
    }

    /// Flat view of every parameter in `w1, b1, w2, b2` order.
    pub fn params(&self) -> Vec<f64> {
        [&self.w1, &self.b1, &self.w2, &self.b2]
            .into_iter()
            .flat_map(|v| v.iter().copied())
            .collect()
    }

    pub fn set_params(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count());
        let (a, rest) = flat.split_at(self.w1.len());
        let (b, rest) = rest.split_at(self.b1.len());
        let (c, d) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(a);
        self.b1.copy_from_slice(b);
        self.w2.copy_from_slice(c);
        self.b2.copy_from_slice(d);
    }
}

impl Gradients {
    pub fn flat(&self) -> Vec<f64> {
        [&self.w1, &self.b1, &self.w2, &self.b2]
            .into_iter()
            .flat_map(|v| v.iter().copied())
            .collect()
    }
}

fn relu(x: f64) -> f64 {
    x.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{substream, Stream};

    #[test]
    fn zero_weights_give_zero_q() {
        let net = Mlp::zeros(4, 32, 2);
        assert_eq!(net.forward(&[0.3, 0.1, 0.9, 0.5]), vec![0.0, 0.0]);
    }

    #[test]
    fn one_by_one_by_one_hand_case() {
        let mut net = Mlp::zeros(1, 1, 1);
        net.w1 = vec![2.0];
        net.b1 = vec![-0.5];
        net.w2 = vec![3.0];
        net.b2 = vec![0.25];
        // relu(2*0.5 - 0.5) * 3 + 0.25
        assert_eq!(net.forward(&[0.5]), vec![1.75]);
        // hidden unit inactive
        assert_eq!(net.forward(&[0.1]), vec![0.25]);
    }

    #[test]
    fn forward_is_pure() {
        let mut rng = substream(3, Stream::Agent, 1);
        let net = Mlp::glorot(4, 32, 2, &mut rng);
        let x = [0.2, 0.4, 0.6, 0.8];
        assert_eq!(net.forward(&x), net.forward(&x));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dimension_mismatch_panics() {
        Mlp::zeros(4, 8, 2).forward(&[1.0]);
    }

    #[test]
    fn params_round_trip() {
        let mut rng = substream(3, Stream::Agent, 2);
        let net = Mlp::glorot(3, 5, 2, &mut rng);
        let mut other = Mlp::zeros(3, 5, 2);
        other.set_params(&net.params());
        assert_eq!(net, other);
    }

    #[test]
    fn non_finite_parameters_are_detected() {
        let mut net = Mlp::zeros(2, 2, 2);
        assert!(net.check_finite().is_ok());
        net.b2[1] = f64::NAN;
        assert!(net.check_finite().unwrap_err().0.contains("b2[1]"));
    }
}

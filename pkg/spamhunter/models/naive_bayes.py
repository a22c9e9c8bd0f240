import numpy as np
from scipy.special import logsumexp

from spamhunter.models.base import SpamModel

VARIANCE_FLOOR = 1e-9


class GaussianNaiveBayes(SpamModel):
    NAME = "naive_bayes"
    DEFAULTS = dict(variance_floor=VARIANCE_FLOOR)

    def _fit(self, X, y):
        classes = (0, 1)
        self.priors = np.array([np.mean(y == c) for c in classes])
        self.means = np.array([X[y == c].mean(axis=0) for c in classes])
        self.variances = np.maximum(
            np.array([X[y == c].var(axis=0) for c in classes]), self.config["variance_floor"]
        )

    def joint_log_likelihood(self, X):
        X = np.atleast_2d(X)
        return np.stack(
            [
                np.log(self.priors[c])
                - 0.5 * np.sum(np.log(2.0 * np.pi * self.variances[c]))
                - 0.5 * np.sum((X - self.means[c]) ** 2 / self.variances[c], axis=1)
                for c in (0, 1)
            ],
            axis=1,
        )

    def posterior(self, X):
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))

    def predict_proba(self, X):
        return self.posterior(X)[:, 1]

    def _params(self):
        return dict(
            priors=self.priors.tolist(),
            means=self.means.tolist(),
            variances=self.variances.tolist(),
        )

    def _load_params(self, params):
        self.priors = np.array(params["priors"], dtype=float)
        self.means = np.array(params["means"], dtype=float)
        self.variances = np.array(params["variances"], dtype=float)

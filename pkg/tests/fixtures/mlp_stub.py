class MLPClassifier:
    """Multi-layer perceptron classifier.

    Parameters
    ----------
    solver : str, {'lbfgs', 'sgd', 'adam'}, default 'adam'
        The solver for weight optimization.

    learning_rate : str, {'constant', 'invscaling', 'adaptive'}, default 'constant'
        Learning rate schedule for weight updates.
        Only used when solver='sgd'.

    power_t : double, optional, default 0.5
        The exponent for inverse scaling learning rate.
        It is used in updating effective learning rate when
        the learning_rate is set to 'invscaling'.
        Only used when solver='sgd'.

    momentum : float, default 0.9
        Momentum for gradient descent update.
        Should be between 0 and 1. Only used when solver='sgd'.

    verbose : bool, optional, default False
        Whether to print progress messages.
    """

    def __init__(self, solver='adam', learning_rate='constant',
                 power_t=0.5, momentum=0.9, verbose=False):
        self.solver = solver
        self.learning_rate = learning_rate
        self.power_t = power_t
        self.momentum = momentum
        self.verbose = verbose

    def fit(self, X, y):
        """Fit the model to data matrix X and target(s) y.

        Parameters
        ----------
        X : array-like, shape = [n_samples, n_features]
            The input data.
        y : array-like, shape = [n_samples]
            The target values.

        Returns
        -------
        self : returns an instance of self.
        """
        return self

    def predict(self, X):
        """Predict using the multi-layer perceptron classifier.

        Parameters
        ----------
        X : array-like, shape = [n_samples, n_features]
            The input data.

        Returns
        -------
        y : array-like, shape = [n_samples]
            The predicted classes.
        """
        return X

''' Experiment configuration, training, evaluation and reporting
'''

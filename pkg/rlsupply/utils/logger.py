import csv
import logging
import os

log = logging.getLogger(__name__)

# Column order of every trajectory file
TRAJECTORY_FIELDS = [
    'episode', 'day', 'retailer_order', 'factory_order', 'omega_scenario_chosen',
    'communicated_inventory', 'customer_demand', 'shipped_to_retailer',
    'retailer_stockout_qty', 'factory_stockout_qty', 'retailer_backlog_qty',
    'factory_backlog_qty', 'retailer_inventory', 'factory_inventory',
    'reward_retailer_base', 'reward_factory_base', 'reward_retailer_shaped',
    'reward_factory_shaped', 'reward_retailer_adjusted', 'reward_factory_adjusted',
    'terminated', 'termination_cause',
]

PERFORMANCE_FIELDS = ['episode', 'day', 'reward_retailer', 'reward_factory', 'reward_global']


def _format(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value


class Logger(object):
    ''' Logger saves the running results and helps make plots from the results
    '''

    def __init__(self, log_dir):
        ''' Initialize the paths of the log files.

        Args:
            log_dir (str): The directory of the log files
        '''
        self.log_dir = log_dir
        self.txt_path = None
        self.csv_path = None

    def __enter__(self):
        self.txt_path = os.path.join(self.log_dir, 'log.txt')
        self.csv_path = os.path.join(self.log_dir, 'performance.csv')
        self.fig_path = os.path.join(self.log_dir, 'performance.svg')

        os.makedirs(self.log_dir, exist_ok=True)

        self.txt_file = open(self.txt_path, 'w')
        self.csv_file = open(self.csv_path, 'w', newline='')
        self.writer = csv.DictWriter(self.csv_file, fieldnames=PERFORMANCE_FIELDS)
        self.writer.writeheader()

        return self

    def log(self, text):
        ''' Write the text to log file and to the module logger.
        Args:
            text(string): text to log
        '''
        self.txt_file.write(text + '\n')
        self.txt_file.flush()
        log.info(text)

    def log_performance(self, episode, day, reward_retailer, reward_factory):
        ''' Log a point in the curve
        Args:
            episode (int): the finished episode
            day (int): simulated days so far
            reward_retailer (float): episode return of the retailer
            reward_factory (float): episode return of the factory
        '''
        self.writer.writerow({
            'episode': episode,
            'day': day,
            'reward_retailer': repr(float(reward_retailer)),
            'reward_factory': repr(float(reward_factory)),
            'reward_global': repr(float(reward_retailer) + float(reward_factory)),
        })
        self.csv_file.flush()
        self.log('episode {:>6} | day {:>7} | retailer {:>10.2f} | factory {:>10.2f}'.format(
            episode, day, reward_retailer, reward_factory))

    def __exit__(self, type, value, traceback):
        if self.txt_path is not None:
            self.txt_file.close()
        if self.csv_path is not None:
            self.csv_file.close()
        log.info('Logs saved in %s', self.log_dir)


class TrajectoryWriter(object):
    ''' Appends one CSV row per simulated day
    '''

    def __init__(self, path):
        self.path = path
        self.rows = 0

    def __enter__(self):
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.file = open(self.path, 'w', newline='')
        self.writer = csv.writer(self.file, lineterminator='\n')
        self.writer.writerow(TRAJECTORY_FIELDS)
        return self

    def write(self, episode, record):
        ''' Write one StepRecord tagged with its episode index
        '''
        row = [episode] + [_format(getattr(record, name)) for name in TRAJECTORY_FIELDS[1:]]
        self.writer.writerow(row)
        self.rows += 1

    def write_episode(self, episode, records):
        for record in records:
            self.write(episode, record)

    def __exit__(self, type, value, traceback):
        self.file.close()

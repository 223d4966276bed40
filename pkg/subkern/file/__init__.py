from .loader import load_file
from .csvio import load_csv, save_csv, load_matrix, save_matrix, load_labels, save_labels

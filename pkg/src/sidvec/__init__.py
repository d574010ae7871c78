"""Cross-lingual word representations from sentence-aligned corpora.

Sentence-ID methods (Dice, IBM Model-1, SID-SGNS, SVD over IDF/PPMI) and the
word-alignment and dictionary-induction benchmarks used to compare them.
"""
from .corpus import (LangWord, OOVError, ParallelCorpus, Vocabulary, build_vocabulary,
                     load_corpus_dir, load_parallel_corpus, tokenize)
from .dice import CooccurrenceStats, dice_similarity, dice_via_dot
from .embedding import EmbeddingMatrix, cosine
from .evaluation import (BilingualDictionary, DiceSimilarity, EmbeddingSimilarity, GoldAlignment,
                         Model1Similarity, compute_aer, greedy_align, induce_p_at_1)
from .matrix import (SparseMatrix, build_indicator_matrix, transform_idf, transform_l1,
                     transform_pmi)
from .model1 import TranslationTable, model1_similarity, train_model1
from .sgns import SgnsConfig, train_sid_sgns
from .svd import randomized_svd, train_inverted_index

__version__ = "0.1.0"

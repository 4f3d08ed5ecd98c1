/** Payload shapes of the /api/v1 JSON API (single source of truth). */

export interface ClassEntry {
  class_id: string;
  label: string;
  language: string;
  instance_count: number;
}

export interface FuzzyConfig {
  enabled: boolean;
  max_cost: number;
  min_token_len: number;
}

export interface Config {
  case_insensitive: boolean;
  strip_diacritics: boolean;
  lemmatize: boolean;
  lemma_table: string | null;
  stopword_language: string | null;
  false_positives: string[];
  extra_aliases: Record<string, string[]>;
  split_names: string[];
  min_length: number;
  priority_order: string[];
  fuzzy: FuzzyConfig;
}

export interface FieldError {
  field: string;
  message: string;
}

export interface Job {
  id: string;
  kind: string;
  state: "queued" | "running" | "done" | "failed";
  progress: number;
  error: string | null;
  result: Record<string, unknown> | null;
}

export interface LabelMetrics {
  tp: number;
  fp: number;
  fn: number;
  precision: number;
  recall: number;
  f1: number;
}

export interface EvalReport {
  per_label: Record<string, LabelMetrics>;
  micro: LabelMetrics;
  top_false_positives: [string, number][];
  top_false_negatives: [string, number][];
}

export interface MetricsSummary {
  labels: Record<string, { precision: number; recall: number; f1: number }>;
  micro: { precision: number; recall: number; f1: number };
}

export interface HistoryStep {
  index: number;
  description: string;
  metrics: MetricsSummary | null;
  timestamp: string;
}

export interface SpanView {
  start: number;
  end: number;
  label: string;
}

export interface SentenceView {
  index: number;
  tokens: string[];
  gold: string[] | null;
  tags: string[] | null;
  spans: SpanView[];
  overrides: { start: number; end: number; label: string }[];
}

export interface CorpusPage {
  id: string;
  page: number;
  size: number;
  total_sentences: number;
  annotated: boolean;
  sentences: SentenceView[];
}

export interface CandidateView {
  label: string;
  lexicon: string;
  source_item: string;
  surface: string;
  start: number;
  length: number;
  fuzzy_cost: number;
  won: boolean;
}

export interface Inspection {
  token: string;
  gold: string | null;
  predicted: string;
  candidates: CandidateView[];
}

export interface CorpusInfo {
  id: string;
  sentences: number;
  tokens: number;
  has_gold: boolean;
  annotated: boolean;
}

export interface LexiconInfo {
  name: string;
  label: string;
  language: string;
  entries: number;
}

export interface ProjectInfo {
  language: string;
  dump: string | null;
  corpora: CorpusInfo[];
  lexicons: LexiconInfo[];
  has_index: boolean;
  config_digest: string;
}

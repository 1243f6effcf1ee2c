/** Wire types for the intervene-bn service endpoints. */

export interface ModelListEntry {
  id: string;
  name: string;
}

export interface VariableSchema {
  name: string;
  states: string[];
  parents: string[];
  roles: string[];
}

export interface ModelSchema {
  id: string;
  name: string;
  variables: VariableSchema[];
}

export interface QueryRequest {
  target: { variable: string; state: string };
  evidence: Record<string, string>;
  do: Record<string, string>;
}

export interface QueryResponse {
  variable: string;
  states: string[];
  distribution: number[];
  state: string;
  probability: number;
  risk_group: string;
}

export interface BoundsRequest {
  target: { variable: string; state: string };
  evidence: Record<string, string>;
  direction: 'max' | 'min';
  space?: SpaceDoc | null;
}

export interface SpaceDoc {
  interventions: Array<{
    variable: string;
    values: string[];
    may_abstain?: boolean;
  }>;
}

export interface BoundResult {
  direction: string;
  value: number;
  witness: Record<string, string>;
  explored: number;
}

export type JobState = 'running' | 'done' | 'cancelled' | 'error';

export interface JobStatus {
  job: string;
  model: string;
  status: JobState;
  explored: number;
  total: number;
  result: BoundResult | null;
  error: string | null;
}

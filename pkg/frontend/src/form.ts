/** Schema-driven form description: which selectors to render, with which
 * options, and which variables belong in the therapy (intervention) panel.
 * Pure data in, pure data out; the DOM wiring lives in main.ts. */

import type { ModelSchema, VariableSchema } from './types';

export const UNKNOWN = '(unknown)';

export interface SelectorSpec {
  variable: string;
  /** First option is always "(unknown)" = excluded from evidence. */
  options: string[];
  roles: string[];
}

export interface FormSpec {
  /** Evidence selectors, one per non-intervention variable. */
  evidence: SelectorSpec[];
  /** Intervention-tagged variables, rendered as a separate therapy panel. */
  therapy: SelectorSpec[];
  /** Target candidates: tagged variables first, else every variable. */
  targets: VariableSchema[];
  empty: boolean;
}

function selector(variable: VariableSchema): SelectorSpec {
  return {
    variable: variable.name,
    options: [UNKNOWN, ...variable.states],
    roles: variable.roles,
  };
}

export function buildForm(schema: ModelSchema): FormSpec {
  const therapy = schema.variables.filter((v) => v.roles.includes('intervention'));
  const therapyNames = new Set(therapy.map((v) => v.name));
  const evidence = schema.variables.filter((v) => !therapyNames.has(v.name));
  const tagged = schema.variables.filter((v) => v.roles.includes('target'));
  return {
    evidence: evidence.map(selector),
    therapy: therapy.map(selector),
    targets: tagged.length ? tagged : schema.variables,
    empty: schema.variables.length === 0,
  };
}

/** Selection -> evidence value: "(unknown)" maps to null (not observed). */
export function selectionToValue(option: string): string | null {
  return option === UNKNOWN ? null : option;
}

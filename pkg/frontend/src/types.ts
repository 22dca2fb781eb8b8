/** Wire types for the cnd REST API. */

export interface ArticleItem {
  id: string
  title: string
  abstract: string
  url: string
  published_date: string
  newsworthiness: number | null
  outlet_relevance: number | null
  angles: string[] | null
  redundant_flags: boolean[] | null
}

export interface ArticlesPage {
  items: ArticleItem[]
  total_matches: number
  page: number
  page_size: number
  skipped_unscored: number
}

export interface OutletSummary {
  outlet_id: string
  name: string
  url: string
  outlet_type: string
  item_count: number
  embedded: boolean
  vector_count: number
}

export interface DisclosureSection {
  topic: string
  title: string
  body: string
  references: string[]
}

export interface Disclosure {
  sections: DisclosureSection[]
}

export interface AngleSetResponse {
  article_id: string
  angles: string[]
  prompt_text: string
  params: Record<string, unknown>
  redundant_flags: boolean[]
  provider_meta: Record<string, string>
}

export interface FieldError {
  field: string
  message: string
}
